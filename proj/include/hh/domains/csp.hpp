#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hh/common.hpp"
#include "hh/core.hpp"
#include "hh/stats.hpp"

namespace hh::csp {

/// Binary extensional CSP: variables with finite integer domains and
/// conflict-tuple constraints over unordered variable pairs.
struct CspInstance {
    struct Variable {
        std::string name;
        std::vector<int> domain;
    };
    struct Constraint {
        int a = 0;
        int b = 0;
        std::vector<std::pair<int, int>> conflicts; // (value of a, value of b), sorted
    };

    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
};

inline void validate(const CspInstance& inst) {
    std::vector<std::pair<int, int>> seen;
    for (const auto& c : inst.constraints) {
        if (c.a < 0 || c.b < 0 || c.a >= static_cast<int>(inst.variables.size()) ||
            c.b >= static_cast<int>(inst.variables.size()) || c.a == c.b)
            throw std::invalid_argument("CspInstance: bad constraint scope");
        auto key = std::minmax(c.a, c.b);
        if (std::find(seen.begin(), seen.end(), std::pair<int, int>(key.first, key.second)) != seen.end())
            throw std::invalid_argument("CspInstance: duplicate constraint on a variable pair");
        seen.emplace_back(key.first, key.second);
        const auto& da = inst.variables[static_cast<std::size_t>(c.a)].domain;
        const auto& db = inst.variables[static_cast<std::size_t>(c.b)].domain;
        for (const auto& [va, vb] : c.conflicts)
            if (std::find(da.begin(), da.end(), va) == da.end() ||
                std::find(db.begin(), db.end(), vb) == db.end())
                throw std::invalid_argument("CspInstance: conflict tuple outside domains");
    }
    for (const auto& v : inst.variables)
        if (v.domain.empty()) throw std::invalid_argument("CspInstance: empty domain");
}

inline double tightness(const CspInstance& inst, const CspInstance::Constraint& c) {
    double pairs = static_cast<double>(inst.variables[static_cast<std::size_t>(c.a)].domain.size()) *
                   static_cast<double>(inst.variables[static_cast<std::size_t>(c.b)].domain.size());
    return pairs > 0.0 ? static_cast<double>(c.conflicts.size()) / pairs : 0.0;
}

// --- parsing -------------------------------------------------------------

/// Canonical JSON form:
/// {"variables":[{"name":...,"domain":[..]}],
///  "constraints":[{"scope":[i,j],"conflicts":[[a,b],...]}]}
inline CspInstance parse_csp_json(const nlohmann::json& j) {
    CspInstance inst;
    try {
        for (const auto& v : j.at("variables")) {
            CspInstance::Variable var;
            var.name = v.value("name", "v" + std::to_string(inst.variables.size()));
            var.domain = v.at("domain").get<std::vector<int>>();
            inst.variables.push_back(std::move(var));
        }
        for (const auto& c : j.at("constraints")) {
            CspInstance::Constraint con;
            con.a = c.at("scope").at(0).get<int>();
            con.b = c.at("scope").at(1).get<int>();
            if (c.at("scope").size() != 2)
                throw ParseError("parse_csp: non-binary constraint scope");
            for (const auto& t : c.value("conflicts", nlohmann::json::array()))
                con.conflicts.emplace_back(t.at(0).get<int>(), t.at(1).get<int>());
            std::sort(con.conflicts.begin(), con.conflicts.end());
            inst.constraints.push_back(std::move(con));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("parse_csp: malformed document: ") + e.what());
    }
    validate(inst);
    return inst;
}

inline nlohmann::json csp_to_json(const CspInstance& inst) {
    nlohmann::json j;
    j["variables"] = nlohmann::json::array();
    for (const auto& v : inst.variables)
        j["variables"].push_back({{"name", v.name}, {"domain", v.domain}});
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : inst.constraints) {
        nlohmann::json conflicts = nlohmann::json::array();
        for (const auto& [a, b] : c.conflicts) conflicts.push_back({a, b});
        j["constraints"].push_back({{"scope", {c.a, c.b}}, {"conflicts", conflicts}});
    }
    return j;
}

namespace xcsp_detail {

struct Tag {
    std::string name;
    std::string attrs;
    std::string body;
};

inline std::string attr(const std::string& attrs, const std::string& key) {
    auto pos = attrs.find(key + "=\"");
    if (pos == std::string::npos) return {};
    pos += key.size() + 2;
    auto end = attrs.find('"', pos);
    return attrs.substr(pos, end - pos);
}

/// All <name ...>body</name> and <name .../> elements, non-nested scan.
inline std::vector<Tag> elements(const std::string& text, const std::string& name) {
    std::vector<Tag> out;
    std::size_t pos = 0;
    const std::string open = "<" + name;
    while ((pos = text.find(open, pos)) != std::string::npos) {
        char after = text[pos + open.size()];
        if (after != ' ' && after != '>' && after != '/' && after != '\t' && after != '\n') {
            ++pos;
            continue;
        }
        std::size_t gt = text.find('>', pos);
        if (gt == std::string::npos) throw ParseError("parse_csp: unterminated <" + name + ">");
        Tag t;
        t.attrs = text.substr(pos + open.size(), gt - pos - open.size());
        if (!t.attrs.empty() && t.attrs.back() == '/') {
            pos = gt + 1;
        } else {
            std::size_t close = text.find("</" + name + ">", gt);
            if (close == std::string::npos)
                throw ParseError("parse_csp: missing </" + name + ">");
            t.body = text.substr(gt + 1, close - gt - 1);
            pos = close + name.size() + 3;
        }
        t.name = name;
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<int> parse_values(const std::string& body) {
    std::vector<int> vals;
    std::istringstream in(body);
    std::string tok;
    while (in >> tok) {
        auto dots = tok.find("..");
        if (dots != std::string::npos) {
            int lo = std::stoi(tok.substr(0, dots));
            int hi = std::stoi(tok.substr(dots + 2));
            for (int v = lo; v <= hi; ++v) vals.push_back(v);
        } else {
            vals.push_back(std::stoi(tok));
        }
    }
    return vals;
}

} // namespace xcsp_detail

/// XCSP 2.1 subset: binary extensional relations with conflicts or supports
/// semantics. Supports are converted to the complementary conflict set.
inline CspInstance parse_csp_xcsp(const std::string& text) {
    using namespace xcsp_detail;
    CspInstance inst;

    std::vector<std::pair<std::string, std::vector<int>>> domains;
    for (const auto& d : elements(text, "domain"))
        domains.emplace_back(attr(d.attrs, "name"), parse_values(d.body));

    std::vector<std::string> var_names;
    for (const auto& v : elements(text, "variable")) {
        std::string dom = attr(v.attrs, "domain");
        auto it = std::find_if(domains.begin(), domains.end(),
                               [&](const auto& p) { return p.first == dom; });
        if (it == domains.end())
            throw ParseError("parse_csp: variable references unknown domain " + dom);
        CspInstance::Variable var;
        var.name = attr(v.attrs, "name");
        var.domain = it->second;
        var_names.push_back(var.name);
        inst.variables.push_back(std::move(var));
    }

    struct Relation {
        std::string semantics;
        std::vector<std::pair<int, int>> tuples;
    };
    std::vector<std::pair<std::string, Relation>> relations;
    for (const auto& r : elements(text, "relation")) {
        if (attr(r.attrs, "arity") != "2")
            throw ParseError("parse_csp: non-binary relation " + attr(r.attrs, "name"));
        Relation rel;
        rel.semantics = attr(r.attrs, "semantics");
        if (rel.semantics != "conflicts" && rel.semantics != "supports")
            throw ParseError("parse_csp: unknown relation semantics in " + attr(r.attrs, "name"));
        std::string body = r.body;
        std::replace(body.begin(), body.end(), '|', '\n');
        std::istringstream in(body);
        int a, b;
        while (in >> a >> b) rel.tuples.emplace_back(a, b);
        relations.emplace_back(attr(r.attrs, "name"), std::move(rel));
    }

    for (const auto& c : elements(text, "constraint")) {
        std::string scope = attr(c.attrs, "scope");
        std::istringstream in(scope);
        std::vector<int> vars;
        std::string name;
        while (in >> name) {
            auto it = std::find(var_names.begin(), var_names.end(), name);
            if (it == var_names.end())
                throw ParseError("parse_csp: constraint scope names unknown variable " + name);
            vars.push_back(static_cast<int>(it - var_names.begin()));
        }
        if (vars.size() != 2)
            throw ParseError("parse_csp: non-binary constraint " + attr(c.attrs, "name"));
        std::string ref = attr(c.attrs, "reference");
        auto rit = std::find_if(relations.begin(), relations.end(),
                                [&](const auto& p) { return p.first == ref; });
        if (rit == relations.end())
            throw ParseError("parse_csp: constraint references unknown relation " + ref);
        CspInstance::Constraint con;
        con.a = vars[0];
        con.b = vars[1];
        if (rit->second.semantics == "conflicts") {
            con.conflicts = rit->second.tuples;
        } else {
            const auto& da = inst.variables[static_cast<std::size_t>(con.a)].domain;
            const auto& db = inst.variables[static_cast<std::size_t>(con.b)].domain;
            for (int va : da)
                for (int vb : db)
                    if (std::find(rit->second.tuples.begin(), rit->second.tuples.end(),
                                  std::pair<int, int>(va, vb)) == rit->second.tuples.end())
                        con.conflicts.emplace_back(va, vb);
        }
        std::sort(con.conflicts.begin(), con.conflicts.end());
        inst.constraints.push_back(std::move(con));
    }
    validate(inst);
    return inst;
}

// --- features ------------------------------------------------------------

constexpr double kKappaTermCap = 52.0; // -log2(eps) bound for tightness-1 constraints

/// Constrainedness estimate of a subproblem:
/// sum_c -log2(1 - tightness_c) / sum_v log2 |D_v|.
inline double kappa(const CspInstance& inst, const std::vector<int>& vars,
                    const std::vector<int>& constraint_ids) {
    double num = 0.0;
    for (int ci : constraint_ids) {
        double t = tightness(inst, inst.constraints[static_cast<std::size_t>(ci)]);
        num += t >= 1.0 ? kKappaTermCap : -std::log2(1.0 - t);
    }
    double den = 0.0;
    for (int v : vars)
        den += std::log2(static_cast<double>(inst.variables[static_cast<std::size_t>(v)].domain.size()));
    if (den <= 0.0) return num > 0.0 ? kKappaTermCap : 0.0;
    return num / den;
}

struct CspFeatures {
    double p1 = 0.0, p2 = 0.0, c = 0.0;
    double uq_p1 = 0.0, lq_p1 = 0.0, uq_p2 = 0.0, lq_p2 = 0.0;
    double kappa = 0.0;

    FeatureVector as_vector() const { return {p1, p2, c, uq_p1, lq_p1, uq_p2, lq_p2, kappa}; }
};

/// Features of the subproblem induced by a set of (unassigned) variables and
/// the constraints fully inside it.
inline CspFeatures compute_features(const CspInstance& inst, const std::vector<int>& vars,
                                    const std::vector<int>& constraint_ids) {
    CspFeatures f;
    const std::size_t n = vars.size();
    if (n < 2) return f;

    // adjacency within the subproblem
    std::vector<std::vector<int>> adj(n);
    std::vector<int> local(inst.variables.size(), -1);
    for (std::size_t i = 0; i < n; ++i) local[static_cast<std::size_t>(vars[i])] = static_cast<int>(i);
    std::vector<double> tights;
    for (int ci : constraint_ids) {
        const auto& con = inst.constraints[static_cast<std::size_t>(ci)];
        int la = local[static_cast<std::size_t>(con.a)], lb = local[static_cast<std::size_t>(con.b)];
        adj[static_cast<std::size_t>(la)].push_back(lb);
        adj[static_cast<std::size_t>(lb)].push_back(la);
        tights.push_back(tightness(inst, con));
    }

    double possible_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    f.p1 = static_cast<double>(constraint_ids.size()) / possible_pairs;
    if (!tights.empty()) {
        double s = 0.0;
        for (double t : tights) s += t;
        f.p2 = s / static_cast<double>(tights.size());
    }

    // mean local clustering coefficient
    double csum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = adj[i];
        if (nb.size() < 2) continue; // coefficient 0
        int links = 0;
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b)
                if (std::find(adj[static_cast<std::size_t>(nb[a])].begin(),
                              adj[static_cast<std::size_t>(nb[a])].end(),
                              nb[b]) != adj[static_cast<std::size_t>(nb[a])].end())
                    ++links;
        csum += static_cast<double>(links) /
                (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1) / 2.0);
    }
    f.c = csum / static_cast<double>(n);

    // per-variable density and per-constraint tightness quartiles (type-7)
    std::vector<double> densities;
    for (std::size_t i = 0; i < n; ++i)
        densities.push_back(static_cast<double>(adj[i].size()) / static_cast<double>(n - 1));
    std::sort(densities.begin(), densities.end());
    f.uq_p1 = stats::quantile_type7(densities, 0.75);
    f.lq_p1 = stats::quantile_type7(densities, 0.25);
    if (!tights.empty()) {
        std::sort(tights.begin(), tights.end());
        f.uq_p2 = stats::quantile_type7(tights, 0.75);
        f.lq_p2 = stats::quantile_type7(tights, 0.25);
    }

    f.kappa = kappa(inst, vars, constraint_ids);
    return f;
}

// --- search state and heuristics ----------------------------------------

/// Depth-first backtracking state with backward checking. One solve-loop
/// action instantiates one variable (backtracking as needed); consistency
/// checks are counted per constraint evaluation.
struct CspSearchState {
    const CspInstance* instance = nullptr;

    struct Frame {
        int var = 0;
        int value_index = -1;
    };

    std::vector<int> assignment;   // value index into the variable's domain, -1 if unassigned
    std::vector<Frame> stack;
    std::vector<long> weights;     // per constraint, for WDEG
    long long cc = 0;
    bool exhausted = false;
    bool found_solution = false;
    FeatureVector last_features;   // returned for degenerate (<2 unassigned) queries

    // per variable: (constraint id, other endpoint), ascending by constraint id
    std::vector<std::vector<std::pair<int, int>>> incident;
};

inline CspSearchState make_search_state(const CspInstance& inst) {
    CspSearchState s;
    s.instance = &inst;
    s.assignment.assign(inst.variables.size(), -1);
    s.weights.assign(inst.constraints.size(), 1);
    s.incident.resize(inst.variables.size());
    for (int ci = 0; ci < static_cast<int>(inst.constraints.size()); ++ci) {
        const auto& c = inst.constraints[static_cast<std::size_t>(ci)];
        s.incident[static_cast<std::size_t>(c.a)].emplace_back(ci, c.b);
        s.incident[static_cast<std::size_t>(c.b)].emplace_back(ci, c.a);
    }
    s.last_features.assign(8, 0.0);
    return s;
}

inline bool search_finished(const CspSearchState& s) {
    return s.exhausted || s.found_solution;
}

inline std::vector<int> unassigned_vars(const CspSearchState& s) {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(s.assignment.size()); ++v)
        if (s.assignment[static_cast<std::size_t>(v)] < 0) out.push_back(v);
    return out;
}

inline std::vector<int> subproblem_constraints(const CspSearchState& s) {
    std::vector<int> out;
    for (int ci = 0; ci < static_cast<int>(s.instance->constraints.size()); ++ci) {
        const auto& c = s.instance->constraints[static_cast<std::size_t>(ci)];
        if (s.assignment[static_cast<std::size_t>(c.a)] < 0 &&
            s.assignment[static_cast<std::size_t>(c.b)] < 0)
            out.push_back(ci);
    }
    return out;
}

/// Fewest available values; ties to the lowest variable index. With backward
/// checking domains are static, so this uses original domain sizes.
inline int heuristic_dom(const CspSearchState& s) {
    int best = -1;
    std::size_t best_size = 0;
    for (int v : unassigned_vars(s)) {
        std::size_t size = s.instance->variables[static_cast<std::size_t>(v)].domain.size();
        if (best < 0 || size < best_size) {
            best = v;
            best_size = size;
        }
    }
    return best;
}

inline int degree_unassigned(const CspSearchState& s, int v) {
    int deg = 0;
    for (const auto& [ci, other] : s.incident[static_cast<std::size_t>(v)])
        if (s.assignment[static_cast<std::size_t>(other)] < 0) ++deg;
    return deg;
}

inline int heuristic_deg(const CspSearchState& s) {
    int best = -1, best_deg = -1;
    for (int v : unassigned_vars(s)) {
        int deg = degree_unassigned(s, v);
        if (deg > best_deg) {
            best = v;
            best_deg = deg;
        }
    }
    return best;
}

/// Variable whose removal minimizes the kappa of the residual subproblem.
inline int heuristic_kappa(const CspSearchState& s) {
    auto vars = unassigned_vars(s);
    if (vars.size() == 1) return vars.front();
    auto cons = subproblem_constraints(s);
    int best = -1;
    double best_kappa = std::numeric_limits<double>::infinity();
    for (int v : vars) {
        std::vector<int> rest_vars;
        for (int u : vars)
            if (u != v) rest_vars.push_back(u);
        std::vector<int> rest_cons;
        for (int ci : cons) {
            const auto& c = s.instance->constraints[static_cast<std::size_t>(ci)];
            if (c.a != v && c.b != v) rest_cons.push_back(ci);
        }
        double k = kappa(*s.instance, rest_vars, rest_cons);
        if (k < best_kappa) {
            best_kappa = k;
            best = v;
        }
    }
    return best;
}

inline int heuristic_wdeg(const CspSearchState& s) {
    int best = -1;
    long best_w = -1;
    for (int v : unassigned_vars(s)) {
        long w = 0;
        for (const auto& [ci, other] : s.incident[static_cast<std::size_t>(v)])
            if (s.assignment[static_cast<std::size_t>(other)] < 0)
                w += s.weights[static_cast<std::size_t>(ci)];
        if (w > best_w) {
            best = v;
            best_w = w;
        }
    }
    return best;
}

namespace detail {

inline bool has_conflict(const CspInstance::Constraint& c, int va, int vb) {
    return std::binary_search(c.conflicts.begin(), c.conflicts.end(), std::pair<int, int>(va, vb));
}

/// Backward check of var=value against all assigned neighbors, in constraint
/// id order; one cc per constraint evaluated, stopping at the first
/// violation, whose weight is incremented.
inline bool check_assignment(CspSearchState& s, int var, int value_index) {
    int value = s.instance->variables[static_cast<std::size_t>(var)]
                    .domain[static_cast<std::size_t>(value_index)];
    for (const auto& [ci, other] : s.incident[static_cast<std::size_t>(var)]) {
        int other_vi = s.assignment[static_cast<std::size_t>(other)];
        if (other_vi < 0) continue;
        int other_value = s.instance->variables[static_cast<std::size_t>(other)]
                              .domain[static_cast<std::size_t>(other_vi)];
        const auto& con = s.instance->constraints[static_cast<std::size_t>(ci)];
        ++s.cc;
        bool violated = con.a == var ? has_conflict(con, value, other_value)
                                     : has_conflict(con, other_value, value);
        if (violated) {
            ++s.weights[static_cast<std::size_t>(ci)];
            return false;
        }
    }
    return true;
}

/// Try successive values for the top frame's variable; assign on success.
inline bool advance_frame(CspSearchState& s) {
    auto& frame = s.stack.back();
    const auto& domain = s.instance->variables[static_cast<std::size_t>(frame.var)].domain;
    for (int vi = frame.value_index + 1; vi < static_cast<int>(domain.size()); ++vi) {
        if (check_assignment(s, frame.var, vi)) {
            frame.value_index = vi;
            s.assignment[static_cast<std::size_t>(frame.var)] = vi;
            return true;
        }
    }
    return false;
}

} // namespace detail

/// One backtracking step: pick a variable with the chooser, assign it its
/// first consistent value (ascending domain order); if none exists, backtrack
/// through the stack until some earlier variable advances or the search is
/// exhausted.
template <typename Chooser>
void backtracking_step(CspSearchState& s, Chooser&& choose_variable) {
    if (search_finished(s)) throw std::invalid_argument("backtracking_step: search is finished");
    int var = choose_variable(s);
    s.stack.push_back({var, -1});
    s.assignment[static_cast<std::size_t>(var)] = -1;
    while (!s.stack.empty()) {
        if (detail::advance_frame(s)) {
            if (s.stack.size() == s.assignment.size()) s.found_solution = true;
            return;
        }
        s.assignment[static_cast<std::size_t>(s.stack.back().var)] = -1;
        s.stack.pop_back();
    }
    s.exhausted = true; // proven unsatisfiable
}

// --- metrics -------------------------------------------------------------

struct CspMetrics {
    double cc_total = 0.0;  // CC over all instances
    double acc = 0.0;       // CC over instances finished within budget
    double sr = 0.0;        // completed / total
};

inline CspMetrics csp_metrics(const std::vector<SolveOutcome>& outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("csp_metrics: empty outcome list");
    CspMetrics m;
    double completed = 0.0;
    for (const auto& o : outcomes) {
        m.cc_total += o.cost;
        if (!o.timed_out) {
            m.acc += o.cost;
            completed += 1.0;
        }
    }
    m.sr = completed / static_cast<double>(outcomes.size());
    return m;
}

class CspDomain {
public:
    using Instance = CspInstance;
    using State = CspSearchState;

    std::size_t feature_count() const { return 8; }
    std::size_t heuristic_count() const { return 4; }
    bool maximize() const { return false; }

    std::vector<std::string> heuristic_names() const { return {"DOM", "DEG", "KAPPA", "WDEG"}; }

    State make_state(const Instance& inst) const { return make_search_state(inst); }

    FeatureVector compute_features(State& s) const {
        auto vars = unassigned_vars(s);
        if (vars.size() < 2) return s.last_features;
        s.last_features = csp::compute_features(*s.instance, vars, subproblem_constraints(s)).as_vector();
        return s.last_features;
    }

    void apply(State& s, int action) const {
        switch (action) {
        case 0: backtracking_step(s, heuristic_dom); break;
        case 1: backtracking_step(s, heuristic_deg); break;
        case 2: backtracking_step(s, heuristic_kappa); break;
        case 3: backtracking_step(s, heuristic_wdeg); break;
        default: throw std::invalid_argument("CspDomain::apply: bad action");
        }
    }

    bool finished(const State& s) const { return search_finished(s); }
    double cost(const State& s) const { return static_cast<double>(s.cc); }
    double objective(const State& s) const { return static_cast<double>(s.cc); }

    /// GA fitness contribution: CC, with timed-out instances charged the full
    /// budget.
    double fitness_contribution(const SolveOutcome& o, double budget) const {
        return o.timed_out ? budget : o.cost;
    }
};

/// Seeded random binary-extensional instance generator for tests and demos.
inline CspInstance random_instance(Rng& rng, int n_vars, int max_domain, double density,
                                   double mean_tightness) {
    CspInstance inst;
    for (int v = 0; v < n_vars; ++v) {
        CspInstance::Variable var;
        var.name = "v" + std::to_string(v);
        int d = 1 + static_cast<int>(rng.next_below(static_cast<std::size_t>(max_domain)));
        for (int i = 0; i < d; ++i) var.domain.push_back(i);
        inst.variables.push_back(std::move(var));
    }
    for (int a = 0; a < n_vars; ++a) {
        for (int b = a + 1; b < n_vars; ++b) {
            if (rng.next_double() >= density) continue;
            CspInstance::Constraint c;
            c.a = a;
            c.b = b;
            for (int va : inst.variables[static_cast<std::size_t>(a)].domain)
                for (int vb : inst.variables[static_cast<std::size_t>(b)].domain)
                    if (rng.next_double() < mean_tightness) c.conflicts.emplace_back(va, vb);
            std::sort(c.conflicts.begin(), c.conflicts.end());
            if (!c.conflicts.empty()) inst.constraints.push_back(std::move(c));
        }
    }
    return inst;
}

} // namespace hh::csp
