#include "qart/navmodel.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

namespace qart::nav {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ModelError(msg); }

Value value_from_json(const json& j, const std::string& where) {
    if (j.is_boolean()) return static_cast<std::int64_t>(j.get<bool>() ? 1 : 0);
    if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    fail("schema error: " + where + ": expected a scalar value");
}

// ---- expression evaluation ----------------------------------------------

struct EvalCtx {
    const AppState* state;
    const std::map<std::string, Value>* args;
};

std::optional<Value> eval_expr(const Expr& e, const EvalCtx& ctx);

std::optional<double> as_number(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
}

bool values_equal(const Value& a, const Value& b) {
    const auto na = as_number(a);
    const auto nb = as_number(b);
    if (na && nb) return *na == *nb;
    const auto* sa = std::get_if<std::string>(&a);
    const auto* sb = std::get_if<std::string>(&b);
    if (sa && sb) return *sa == *sb;
    return false;
}

std::optional<bool> eval_bool(const Expr& e, const EvalCtx& ctx);

std::optional<bool> compare(const std::string& op, const Expr& lhs, const Expr& rhs,
                            const EvalCtx& ctx) {
    const auto a = eval_expr(lhs, ctx);
    const auto b = eval_expr(rhs, ctx);
    if (!a || !b) return std::nullopt;
    if (op == "==") return values_equal(*a, *b);
    if (op == "!=") return !values_equal(*a, *b);
    const auto na = as_number(*a);
    const auto nb = as_number(*b);
    if (na && nb) {
        if (op == "<") return *na < *nb;
        if (op == "<=") return *na <= *nb;
        if (op == ">") return *na > *nb;
        if (op == ">=") return *na >= *nb;
    }
    const auto* sa = std::get_if<std::string>(&*a);
    const auto* sb = std::get_if<std::string>(&*b);
    if (sa && sb) {
        if (op == "<") return *sa < *sb;
        if (op == "<=") return *sa <= *sb;
        if (op == ">") return *sa > *sb;
        if (op == ">=") return *sa >= *sb;
    }
    return std::nullopt;  // mixed-type ordering is never satisfied
}

std::optional<Value> eval_expr(const Expr& e, const EvalCtx& ctx) {
    if (!e.is_array()) {
        return value_from_json(e, "expression literal");
    }
    const std::string op = e.at(0).get<std::string>();
    if (op == "var") {
        const auto it = ctx.state->variables.find(e.at(1).get<std::string>());
        if (it == ctx.state->variables.end()) return std::nullopt;
        return it->second;
    }
    if (op == "arg") {
        const auto it = ctx.args->find(e.at(1).get<std::string>());
        if (it == ctx.args->end()) return std::nullopt;  // unbound argument
        return it->second;
    }
    if (op == "size") {
        const auto it = ctx.state->collections.find(e.at(1).get<std::string>());
        if (it == ctx.state->collections.end()) return std::nullopt;
        return static_cast<std::int64_t>(it->second.size());
    }
    if (op == "+" || op == "-" || op == "*") {
        const auto a = eval_expr(e.at(1), ctx);
        const auto b = eval_expr(e.at(2), ctx);
        if (!a || !b) return std::nullopt;
        const auto na = as_number(*a);
        const auto nb = as_number(*b);
        if (!na || !nb) return std::nullopt;
        const double r = op == "+" ? *na + *nb : op == "-" ? *na - *nb : *na * *nb;
        // Keep integer arithmetic integral.
        if (std::get_if<std::int64_t>(&*a) && std::get_if<std::int64_t>(&*b)) {
            return static_cast<std::int64_t>(r);
        }
        return r;
    }
    // Boolean forms used as values yield 0/1.
    const auto b = eval_bool(e, ctx);
    if (!b) return std::nullopt;
    return static_cast<std::int64_t>(*b ? 1 : 0);
}

std::optional<bool> eval_bool(const Expr& e, const EvalCtx& ctx) {
    if (!e.is_array()) {
        const auto v = eval_expr(e, ctx);
        if (!v) return std::nullopt;
        const auto n = as_number(*v);
        return n ? std::optional<bool>(*n != 0.0) : std::nullopt;
    }
    const std::string op = e.at(0).get<std::string>();
    if (op == "and") {
        bool unknown = false;
        for (std::size_t i = 1; i < e.size(); ++i) {
            const auto b = eval_bool(e.at(i), ctx);
            if (b && !*b) return false;
            if (!b) unknown = true;
        }
        if (unknown) return std::nullopt;
        return true;
    }
    if (op == "or") {
        bool unknown = false;
        for (std::size_t i = 1; i < e.size(); ++i) {
            const auto b = eval_bool(e.at(i), ctx);
            if (b && *b) return true;
            if (!b) unknown = true;
        }
        if (unknown) return std::nullopt;
        return false;
    }
    if (op == "not") {
        const auto b = eval_bool(e.at(1), ctx);
        if (!b) return std::nullopt;
        return !*b;
    }
    if (op == "nonempty") {
        const auto it = ctx.state->collections.find(e.at(1).get<std::string>());
        if (it == ctx.state->collections.end()) return std::nullopt;
        return !it->second.empty();
    }
    if (op == "contains") {
        const auto it = ctx.state->collections.find(e.at(1).get<std::string>());
        if (it == ctx.state->collections.end()) return std::nullopt;
        const auto v = eval_expr(e.at(2), ctx);
        if (!v) return std::nullopt;
        for (const auto& member : it->second) {
            if (values_equal(member, *v)) return true;
        }
        return false;
    }
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") {
        return compare(op, e.at(1), e.at(2), ctx);
    }
    // Value-producing form in boolean position.
    const auto v = eval_expr(e, ctx);
    if (!v) return std::nullopt;
    const auto n = as_number(*v);
    return n ? std::optional<bool>(*n != 0.0) : std::nullopt;
}

// ---- validation -----------------------------------------------------------

struct Declared {
    std::set<std::string> variables;
    std::set<std::string> collections;
};

void validate_expr(const Expr& e, const Declared& decl,
                   const std::set<std::string>& params, const std::string& where) {
    if (e.is_number() || e.is_string() || e.is_boolean()) return;
    if (!e.is_array() || e.empty() || !e.at(0).is_string()) {
        fail("schema error: " + where + ": expression must be a scalar or [op, ...] array");
    }
    const std::string op = e.at(0).get<std::string>();
    auto need = [&](std::size_t n) {
        if (e.size() != n + 1) {
            fail("schema error: " + where + ": operator '" + op + "' expects " +
                 std::to_string(n) + " operand(s)");
        }
    };
    if (op == "var") {
        need(1);
        const std::string name = e.at(1).get<std::string>();
        if (!decl.variables.count(name)) {
            fail("semantic error: " + where + ": undeclared variable '" + name + "'");
        }
        return;
    }
    if (op == "arg") {
        need(1);
        const std::string name = e.at(1).get<std::string>();
        if (!params.count(name)) {
            fail("semantic error: " + where + ": '" + name + "' is not a parameter of this method");
        }
        return;
    }
    if (op == "size" || op == "nonempty") {
        need(1);
        const std::string name = e.at(1).get<std::string>();
        if (!decl.collections.count(name)) {
            fail("semantic error: " + where + ": undeclared collection '" + name + "'");
        }
        return;
    }
    if (op == "contains") {
        need(2);
        const std::string name = e.at(1).get<std::string>();
        if (!decl.collections.count(name)) {
            fail("semantic error: " + where + ": undeclared collection '" + name + "'");
        }
        validate_expr(e.at(2), decl, params, where);
        return;
    }
    if (op == "not") {
        need(1);
        validate_expr(e.at(1), decl, params, where);
        return;
    }
    if (op == "and" || op == "or") {
        if (e.size() < 3) {
            fail("schema error: " + where + ": '" + op + "' expects at least 2 operands");
        }
        for (std::size_t i = 1; i < e.size(); ++i) validate_expr(e.at(i), decl, params, where);
        return;
    }
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=" ||
        op == "+" || op == "-" || op == "*") {
        need(2);
        validate_expr(e.at(1), decl, params, where);
        validate_expr(e.at(2), decl, params, where);
        return;
    }
    fail("schema error: " + where + ": unknown operator '" + op + "'");
}

ParamSpec parse_param(const json& j, const Declared& decl, const std::string& where) {
    if (!j.is_object() || !j.contains("name") || !j.contains("domain")) {
        fail("schema error: " + where + ": parameter needs 'name' and 'domain'");
    }
    ParamSpec p;
    p.name = j.at("name").get<std::string>();
    const json& d = j.at("domain");
    if (d.contains("int_range")) {
        p.domain = ParamSpec::Domain::int_range;
        p.lo = d.at("int_range").at(0).get<std::int64_t>();
        p.hi = d.at("int_range").at(1).get<std::int64_t>();
        if (p.lo > p.hi) fail("schema error: " + where + ": empty int_range");
    } else if (d.contains("string_pool")) {
        p.domain = ParamSpec::Domain::string_pool;
        p.pool = d.at("string_pool").get<std::vector<std::string>>();
        if (p.pool.empty()) fail("schema error: " + where + ": empty string_pool");
    } else if (d.contains("ref_collection")) {
        p.domain = ParamSpec::Domain::ref_collection;
        p.collection = d.at("ref_collection").get<std::string>();
        if (!decl.collections.count(p.collection)) {
            fail("semantic error: " + where + ": undeclared collection '" + p.collection + "'");
        }
    } else {
        fail("schema error: " + where + ": unknown parameter domain");
    }
    return p;
}

Effect parse_effect(const json& j, const Declared& decl,
                    const std::set<std::string>& params, const std::string& where) {
    if (!j.is_array() || j.empty() || !j.at(0).is_string()) {
        fail("schema error: " + where + ": effect must be [op, ...]");
    }
    const std::string op = j.at(0).get<std::string>();
    Effect eff;
    if (op == "set") {
        if (j.size() != 3) fail("schema error: " + where + ": 'set' expects [set, var, expr]");
        eff.kind = Effect::Kind::set;
        eff.target = j.at(1).get<std::string>();
        if (!decl.variables.count(eff.target)) {
            fail("semantic error: " + where + ": undeclared variable '" + eff.target + "'");
        }
        validate_expr(j.at(2), decl, params, where);
        eff.value = j.at(2);
        return eff;
    }
    if (op == "insert") {
        if (j.size() != 2 && j.size() != 3) {
            fail("schema error: " + where + ": 'insert' expects [insert, coll] or [insert, coll, expr]");
        }
        eff.kind = Effect::Kind::insert;
        eff.target = j.at(1).get<std::string>();
        if (!decl.collections.count(eff.target)) {
            fail("semantic error: " + where + ": undeclared collection '" + eff.target + "'");
        }
        if (j.size() == 3) {
            validate_expr(j.at(2), decl, params, where);
            eff.value = j.at(2);
        }
        return eff;
    }
    if (op == "clear") {
        if (j.size() != 2) fail("schema error: " + where + ": 'clear' expects [clear, coll]");
        eff.kind = Effect::Kind::clear;
        eff.target = j.at(1).get<std::string>();
        if (!decl.collections.count(eff.target)) {
            fail("semantic error: " + where + ": undeclared collection '" + eff.target + "'");
        }
        return eff;
    }
    fail("schema error: " + where + ": unknown effect '" + op + "'");
}

// Applies one effect; false when a value expression cannot be evaluated.
bool apply_effect(const Effect& eff, AppState& state,
                  const std::map<std::string, Value>& args) {
    const EvalCtx ctx{&state, &args};
    switch (eff.kind) {
        case Effect::Kind::set: {
            const auto v = eval_expr(*eff.value, ctx);
            if (!v) return false;
            state.variables[eff.target] = *v;
            return true;
        }
        case Effect::Kind::insert: {
            Value v;
            if (eff.value) {
                const auto ev = eval_expr(*eff.value, ctx);
                if (!ev) return false;
                v = *ev;
            } else {
                v = state.next_ids[eff.target]++;  // auto-increment id, never reused
            }
            state.collections[eff.target].push_back(std::move(v));
            return true;
        }
        case Effect::Kind::clear:
            state.collections[eff.target].clear();
            return true;
    }
    return false;
}

}  // namespace

std::vector<TargetId> NavigationModel::target_ids() const {
    std::vector<TargetId> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.id);
    return out;
}

NavigationModel load_model(const nlohmann::json& document) {
    if (!document.is_object()) fail("schema error: model document must be an object");
    if (!document.contains("schema") || document.at("schema").get<int>() != 1) {
        fail("schema error: missing or unsupported 'schema' (expected 1)");
    }
    NavigationModel m;
    m.name = document.value("name", "");

    if (!document.contains("nodes") || !document.at("nodes").is_array() ||
        document.at("nodes").empty()) {
        fail("schema error: 'nodes' must be a non-empty array");
    }
    std::set<PageId> node_set;
    for (const auto& n : document.at("nodes")) {
        const auto id = n.get<PageId>();
        if (!node_set.insert(id).second) fail("semantic error: duplicate node '" + id + "'");
        m.nodes.push_back(id);
    }

    m.home = document.value("home", "");
    if (!node_set.count(m.home)) {
        fail("semantic error: home node '" + m.home + "' is not declared in 'nodes'");
    }

    Declared decl;
    if (document.contains("state")) {
        const json& st = document.at("state");
        const json vars = st.value("variables", json::object());
        for (const auto& [name, init] : vars.items()) {
            m.initial_state.variables[name] = value_from_json(init, "state variable '" + name + "'");
            decl.variables.insert(name);
        }
        const json colls = st.value("collections", json::object());
        for (const auto& [name, init] : colls.items()) {
            if (!init.is_array()) {
                fail("schema error: collection '" + name + "' initial value must be an array");
            }
            auto& coll = m.initial_state.collections[name];
            for (const auto& v : init) {
                coll.push_back(value_from_json(v, "collection '" + name + "'"));
            }
            m.initial_state.next_ids[name] = static_cast<std::int64_t>(coll.size());
            decl.collections.insert(name);
        }
    }

    if (!document.contains("edges") || !document.at("edges").is_array() ||
        document.at("edges").empty()) {
        fail("semantic error: 'edges' must be non-empty (no coverage targets otherwise)");
    }
    std::set<TargetId> edge_ids;
    for (const auto& ej : document.at("edges")) {
        MethodEdge e;
        e.id = ej.value("id", "");
        const std::string where = "edge '" + e.id + "'";
        if (e.id.empty()) fail("schema error: edge without 'id'");
        if (!edge_ids.insert(e.id).second) fail("semantic error: duplicate edge id '" + e.id + "'");
        e.source = ej.value("source", "");
        e.dest = ej.value("dest", "");
        if (!node_set.count(e.source)) {
            fail("semantic error: " + where + ": undeclared source node '" + e.source + "'");
        }
        if (!node_set.count(e.dest)) {
            fail("semantic error: " + where + ": undeclared dest node '" + e.dest + "'");
        }
        e.method = ej.value("method", "");
        if (e.method.empty()) fail("schema error: " + where + ": missing 'method'");

        std::set<std::string> param_names;
        for (const auto& pj : ej.value("params", json::array())) {
            auto p = parse_param(pj, decl, where);
            if (!param_names.insert(p.name).second) {
                fail("semantic error: " + where + ": duplicate parameter '" + p.name + "'");
            }
            e.params.push_back(std::move(p));
        }
        if (ej.contains("guard")) {
            validate_expr(ej.at("guard"), decl, param_names, where + " guard");
            e.guard = ej.at("guard");
        }
        for (const auto& fj : ej.value("effects", json::array())) {
            e.effects.push_back(parse_effect(fj, decl, param_names, where + " effects"));
        }
        m.edges.push_back(std::move(e));
    }

    for (std::size_t i = 0; i < m.edges.size(); ++i) {
        const auto& e = m.edges[i];
        auto& methods = m.by_method[e.source];
        if (!methods.emplace(e.method, i).second) {
            fail("semantic error: edge '" + e.id + "': method '" + e.method +
                 "' is not unique on node '" + e.source + "'");
        }
        m.outgoing[e.source].push_back(i);
    }
    if (!m.outgoing.count(m.home)) {
        fail("semantic error: home node '" + m.home + "' has no outgoing edges");
    }
    return m;
}

NavigationModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open model file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        fail("schema error: " + path.string() + ": " + e.what());
    }
    auto m = load_model(doc);
    if (m.name.empty()) m.name = path.stem().string();
    return m;
}

ExecutionOutcome execute_test(const NavigationModel& model, const TestCase& test) {
    ExecutionOutcome out;
    AppState state = model.initial_state;
    PageId current = model.home;
    std::set<TargetId> seen;

    for (const auto& action : test.actions) {
        const auto node_it = model.by_method.find(current);
        if (node_it == model.by_method.end()) break;
        const auto edge_it = node_it->second.find(action.method);
        if (edge_it == node_it->second.end()) break;  // no such method here
        const MethodEdge& edge = model.edges[edge_it->second];

        std::map<std::string, Value> args;
        const std::size_t bound = std::min(edge.params.size(), action.args.size());
        for (std::size_t i = 0; i < bound; ++i) {
            args[edge.params[i].name] = action.args[i];
        }

        if (edge.guard) {
            const auto ok = eval_bool(*edge.guard, EvalCtx{&state, &args});
            if (!ok || !*ok) break;  // guard unsatisfied (or unevaluable): infeasible
        }
        bool effects_ok = true;
        for (const auto& eff : edge.effects) {
            if (!apply_effect(eff, state, args)) {
                effects_ok = false;
                break;
            }
        }
        if (!effects_ok) break;

        if (seen.insert(edge.id).second) out.covered_targets.push_back(edge.id);
        current = edge.dest;
    }
    return out;
}

std::vector<std::size_t> random_walk(const NavigationModel& model,
                                     std::size_t max_walk_len, Rng& rng) {
    if (max_walk_len == 0) throw std::invalid_argument("random_walk: max_walk_len must be >= 1");
    std::uniform_int_distribution<std::size_t> len_dist(1, max_walk_len);
    const std::size_t len = len_dist(rng);
    std::vector<std::size_t> walk;
    walk.reserve(len);
    PageId current = model.home;
    for (std::size_t i = 0; i < len; ++i) {
        const auto it = model.outgoing.find(current);
        if (it == model.outgoing.end() || it->second.empty()) break;  // dead end
        std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
        const std::size_t edge_idx = it->second[pick(rng)];
        walk.push_back(edge_idx);
        current = model.edges[edge_idx].dest;
    }
    return walk;
}

std::optional<std::vector<std::size_t>> shortest_edge_path(const NavigationModel& model,
                                                           const PageId& from,
                                                           const PageId& to) {
    if (from == to) return std::vector<std::size_t>{};
    std::deque<PageId> queue{from};
    std::map<PageId, std::size_t> via;  // node -> edge index that reached it
    std::set<PageId> visited{from};
    while (!queue.empty()) {
        const PageId node = queue.front();
        queue.pop_front();
        const auto it = model.outgoing.find(node);
        if (it == model.outgoing.end()) continue;
        for (const std::size_t edge_idx : it->second) {
            const PageId& next = model.edges[edge_idx].dest;
            if (!visited.insert(next).second) continue;
            via[next] = edge_idx;
            if (next == to) {
                std::vector<std::size_t> path;
                PageId cur = to;
                while (cur != from) {
                    const std::size_t e = via.at(cur);
                    path.push_back(e);
                    cur = model.edges[e].source;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

namespace {

Value draw_param(const ParamSpec& p, const AppState& sim, Rng& rng) {
    switch (p.domain) {
        case ParamSpec::Domain::int_range: {
            std::uniform_int_distribution<std::int64_t> d(p.lo, p.hi);
            return d(rng);
        }
        case ParamSpec::Domain::string_pool: {
            std::uniform_int_distribution<std::size_t> d(0, p.pool.size() - 1);
            return p.pool[d(rng)];
        }
        case ParamSpec::Domain::ref_collection: {
            const auto it = sim.collections.find(p.collection);
            if (it != sim.collections.end() && !it->second.empty()) {
                std::uniform_int_distribution<std::size_t> d(0, it->second.size() - 1);
                return it->second[d(rng)];
            }
            // Nothing created along the simulated path; fall back to a random
            // value (the candidate may then simply be infeasible at runtime).
            std::uniform_int_distribution<std::int64_t> d(0, 99);
            return d(rng);
        }
    }
    return std::int64_t{0};
}

// Turns an edge path into a concrete test, drawing parameter values against
// the state expected along the path (effects applied as if every guard held).
TestCase instantiate_path(const NavigationModel& model, std::span<const std::size_t> path,
                          Rng& rng) {
    AppState sim = model.initial_state;
    std::vector<Action> actions;
    actions.reserve(path.size());
    for (const std::size_t idx : path) {
        const MethodEdge& edge = model.edges[idx];
        Action a{edge.method, {}};
        std::map<std::string, Value> bound;
        for (const auto& p : edge.params) {
            Value v = draw_param(p, sim, rng);
            bound[p.name] = v;
            a.args.push_back(std::move(v));
        }
        for (const auto& eff : edge.effects) {
            apply_effect(eff, sim, bound);  // best effort; generation never fails
        }
        actions.push_back(std::move(a));
    }
    return TestCase::from_actions(std::move(actions));
}

template <typename PathLookup>
TestCase generate_candidate_impl(const NavigationModel& model,
                                 const std::unordered_set<TargetId>& covered,
                                 std::size_t max_walk_len, Rng& rng,
                                 PathLookup&& lookup) {
    std::vector<std::size_t> walk = random_walk(model, max_walk_len, rng);

    std::vector<std::size_t> uncovered;
    for (std::size_t i = 0; i < model.edges.size(); ++i) {
        if (!covered.count(model.edges[i].id)) uncovered.push_back(i);
    }
    if (!uncovered.empty()) {
        std::shuffle(uncovered.begin(), uncovered.end(), rng);
        const PageId last = walk.empty() ? model.home : model.edges[walk.back()].dest;
        for (const std::size_t target_idx : uncovered) {
            const auto connector = lookup(last, model.edges[target_idx].source);
            if (!connector) continue;  // unreachable, try the next uncovered edge
            std::vector<std::size_t> full = walk;
            full.insert(full.end(), connector->begin(), connector->end());
            full.push_back(target_idx);
            return instantiate_path(model, full, rng);
        }
    }
    return instantiate_path(model, walk, rng);
}

}  // namespace

TestCase generate_candidate(const NavigationModel& model,
                            const std::unordered_set<TargetId>& covered,
                            std::size_t max_walk_len, Rng& rng) {
    return generate_candidate_impl(model, covered, max_walk_len, rng,
                                   [&](const PageId& from, const PageId& to) {
                                       return shortest_edge_path(model, from, to);
                                   });
}

NavCandidateGenerator::NavCandidateGenerator(
    const NavigationModel& model,
    std::shared_ptr<const std::unordered_set<TargetId>> covered,
    std::size_t max_walk_len)
    : model_(&model), covered_(std::move(covered)), max_walk_len_(max_walk_len) {
    if (!covered_) throw std::invalid_argument("NavCandidateGenerator: null coverage view");
}

std::vector<TestCase> NavCandidateGenerator::sample(std::size_t count, Rng& rng) {
    // Memoized connectors; the model graph is small and immutable.
    auto lookup = [&](const PageId& from, const PageId& to)
        -> const std::optional<std::vector<std::size_t>>& {
        auto key = std::make_pair(from, to);
        auto it = path_cache_.find(key);
        if (it == path_cache_.end()) {
            it = path_cache_.emplace(std::move(key), shortest_edge_path(*model_, from, to))
                     .first;
        }
        return it->second;
    };
    std::vector<TestCase> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(
            generate_candidate_impl(*model_, *covered_, max_walk_len_, rng, lookup));
    }
    return out;
}

NavExecutor::NavExecutor(const NavigationModel& model,
                         std::shared_ptr<std::unordered_set<TargetId>> covered)
    : model_(&model), covered_(std::move(covered)) {
    if (!covered_) throw std::invalid_argument("NavExecutor: null coverage set");
}

ExecutionOutcome NavExecutor::execute(const TestCase& test) {
    ExecutionOutcome out = execute_test(*model_, test);
    covered_->insert(out.covered_targets.begin(), out.covered_targets.end());
    return out;
}

std::size_t NavExecutor::total_targets() const { return model_->total_targets(); }

NavSession make_session(const NavigationModel& model, std::size_t max_walk_len) {
    NavSession s;
    s.covered = std::make_shared<std::unordered_set<TargetId>>();
    s.generator = std::make_unique<NavCandidateGenerator>(model, s.covered, max_walk_len);
    s.executor = std::make_unique<NavExecutor>(model, s.covered);
    return s;
}

}  // namespace qart::nav
