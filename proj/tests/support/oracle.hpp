#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "semnav/kb.hpp"
#include "semnav/ontology.hpp"
#include "semnav/reasoner.hpp"

namespace semnav::testing {

// Brute-force answer of a method, read straight off the KB's edge lists.
// Inputs are canonical. Chained methods enumerate every derivation and keep
// the shortest, then lexicographically smallest.
ReasonerResult oracle(const KnowledgeBase& kb, Method m, const std::vector<std::string>& inputs);

// Exact equality of answers with their ordered chains, ignoring answer order.
bool same_chains(const ReasonerResult& a, const ReasonerResult& b);

// Every upward containment path from an object, as lists of containers.
// Includes the empty path.
std::vector<std::vector<std::string>> container_paths(const KnowledgeBase& kb,
                                                      const std::string& object);

// Naive bottom-up evaluation of a rule set: facts keyed by
// (predicate, subject, object), each with its best chain.
using FactKey = std::tuple<std::string, std::string, std::string>;
std::map<FactKey, std::vector<std::string>> forward_chain(
    const ontology::TripleStore& store,
    const std::vector<ontology::Rule>& rules = ontology::builtin_rules());

}  // namespace semnav::testing
