#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "speakerattr/community.hpp"
#include "speakerattr/graph.hpp"
#include "speakerattr/lexicon.hpp"
#include "speakerattr/model.hpp"
#include "speakerattr/train.hpp"

namespace oracles {

using namespace speakerattr;

// Largest relative error ||analytic - numeric|| / max(||analytic||, ||numeric||)
// per tensor, with central differences of step `h` on the summed loss.
std::map<std::string, double> gradient_errors(const Model& model, const Dataset& data, double h = 1e-4);

// Floyd-Warshall with +inf for unreachable pairs.
std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& graph);

// Best partition over every set partition of a small graph (Bell-number search).
struct ExhaustiveBest {
  std::vector<std::size_t> community;
  double modularity = 0.0;
};
ExhaustiveBest exhaustive_modularity(const UndirectedGraph& graph, double resolution = 1.0);

// Category hit counts by testing every token against every pattern directly.
std::vector<double> naive_category_counts(const std::vector<std::string>& tokens, const CategoryLexicon& lexicon);

}  // namespace oracles
