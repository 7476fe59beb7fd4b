#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "qart/selectors.hpp"
#include "qart/testcase.hpp"

namespace qart::nav {

using PageId = std::string;

// Raised by load_model for both schema errors (malformed document) and
// semantic errors (dangling references, duplicate ids, undeclared state).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Guards and effect values share one little expression language, stored as
// prefix-notation JSON arrays: ["and", ["nonempty","owners"], [">=", ["arg","id"], 0]].
// Evaluation is total and side-effect free; referencing an unbound argument
// makes the enclosing action infeasible rather than throwing.
using Expr = nlohmann::json;

struct ParamSpec {
    enum class Domain { int_range, string_pool, ref_collection };
    std::string name;
    Domain domain = Domain::int_range;
    std::int64_t lo = 0, hi = 0;          // int_range
    std::vector<std::string> pool;        // string_pool
    std::string collection;               // ref_collection
};

struct Effect {
    enum class Kind { set, insert, clear };
    Kind kind = Kind::set;
    std::string target;          // variable or collection name
    std::optional<Expr> value;   // set: required; insert: optional (auto-id when absent)
};

struct MethodEdge {
    TargetId id;
    PageId source;
    PageId dest;
    std::string method;
    std::vector<ParamSpec> params;
    std::optional<Expr> guard;
    std::vector<Effect> effects;
};

// Abstract application state: scalar variables plus named collections of
// values (e.g. created entity ids). Auto-increment insert ids are tracked
// per collection.
struct AppState {
    std::map<std::string, Value> variables;
    std::map<std::string, std::vector<Value>> collections;
    std::map<std::string, std::int64_t> next_ids;
};

struct NavigationModel {
    std::string name;
    std::vector<PageId> nodes;
    PageId home;
    AppState initial_state;
    std::vector<MethodEdge> edges;

    // Derived lookups, built by load_model.
    std::unordered_map<PageId, std::vector<std::size_t>> outgoing;  // node -> edge indices
    std::unordered_map<PageId, std::unordered_map<std::string, std::size_t>> by_method;

    std::size_t total_targets() const noexcept { return edges.size(); }
    std::vector<TargetId> target_ids() const;
};

NavigationModel load_model(const nlohmann::json& document);
NavigationModel load_model_file(const std::filesystem::path& path);

// Replays the test from the home node against a fresh AppState. An action
// succeeds iff an edge with that method leaves the current node and its guard
// holds under the current state and arguments; the first infeasible action
// stops execution (prefix semantics). Infeasibility is an outcome, not an error.
ExecutionOutcome execute_test(const NavigationModel& model, const TestCase& test);

// Random-walk candidate generation: pick a random not-yet-covered edge,
// random-walk from home for a length ~ U[1, max_walk_len], connect the walk's
// last node to the chosen edge's source by BFS shortest path (guards
// ignored), append the chosen edge, and instantiate parameters against the
// state simulated along the path. With nothing uncovered (or every uncovered
// edge unreachable) the plain random walk is returned.
TestCase generate_candidate(const NavigationModel& model,
                            const std::unordered_set<TargetId>& covered,
                            std::size_t max_walk_len, Rng& rng);

// The walk primitive on its own (also the fallback branch above).
std::vector<std::size_t> random_walk(const NavigationModel& model,
                                     std::size_t max_walk_len, Rng& rng);

// BFS shortest edge path between nodes, ignoring guards; nullopt when
// unreachable. Deterministic: adjacency in edge declaration order.
std::optional<std::vector<std::size_t>> shortest_edge_path(const NavigationModel& model,
                                                           const PageId& from,
                                                           const PageId& to);

class NavCandidateGenerator final : public CandidateGenerator {
public:
    NavCandidateGenerator(const NavigationModel& model,
                          std::shared_ptr<const std::unordered_set<TargetId>> covered,
                          std::size_t max_walk_len = 40);
    std::vector<TestCase> sample(std::size_t count, Rng& rng) override;

private:
    const NavigationModel* model_;
    std::shared_ptr<const std::unordered_set<TargetId>> covered_;
    std::size_t max_walk_len_;
    std::map<std::pair<PageId, PageId>, std::optional<std::vector<std::size_t>>> path_cache_;
};

class NavExecutor final : public Executor {
public:
    NavExecutor(const NavigationModel& model,
                std::shared_ptr<std::unordered_set<TargetId>> covered);
    ExecutionOutcome execute(const TestCase& test) override;
    std::size_t total_targets() const override;

private:
    const NavigationModel* model_;
    std::shared_ptr<std::unordered_set<TargetId>> covered_;
};

// One test-generation run's moving parts: the generator adapts to what the
// executor has covered so far through the shared coverage set.
struct NavSession {
    std::shared_ptr<std::unordered_set<TargetId>> covered;
    std::unique_ptr<NavCandidateGenerator> generator;
    std::unique_ptr<NavExecutor> executor;
};

NavSession make_session(const NavigationModel& model, std::size_t max_walk_len = 40);

}  // namespace qart::nav
