#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "madasub/enumerate.hpp"
#include "madasub/kernel.hpp"
#include "madasub/model_index.hpp"
#include "madasub/sampler.hpp"

namespace madasub {

// f_j = fraction of S(b+1..T) containing j. Requires b < trace length.
std::vector<double> inclusion_frequencies(const ChainTrace& trace, std::size_t burn_in);

// Mean accept flag over iterations b+1..T.
double acceptance_rate(const ChainTrace& trace, std::size_t burn_in = 0);

// Acceptance rate after each iteration: cumulative when window == 0,
// otherwise over the trailing `window` iterations (shorter at the start).
std::vector<double> acceptance_rate_series(const ChainTrace& trace, std::size_t window = 0);

// Effective sample size of a 0/1 indicator series using Geyer's initial
// positive sequence: ESS = N / (-1 + 2 sum_m Gamma_m), with
// Gamma_m = rho_{2m} + rho_{2m+1} summed while positive and rho the
// biased (1/N) sample autocorrelation. A constant series has ESS = N by
// convention. Requires N >= 100.
double ess_indicator(std::span<const double> series);

// ESS of the inclusion indicator of every variable after burn-in.
std::vector<double> ess_per_variable(const ChainTrace& trace, std::size_t burn_in);

double median(std::vector<double> values);

// {j : pip_j >= 0.5}
ModelIndex median_probability_model(std::span<const double> pips);

// r0_j = min{max{PO_j / (1 + PO_j), 1/p}, 0.9} with
// PO_j = exp(logk({j}) - logk({})). Costs p + 1 kernel evaluations.
std::vector<double> marginal_odds_init(PosteriorKernel& kernel);

using ModelDistribution = std::unordered_map<ModelIndex, double, ModelIndexHash>;

// Relative visit frequencies of S(b+1..T).
ModelDistribution empirical_model_distribution(const ChainTrace& trace, std::size_t burn_in);

// Total-variation distance between an empirical distribution and the exact
// table: 1/2 sum_S |hat pi(S) - pi(S)|.
double total_variation(const ModelDistribution& empirical, const ExactPosterior& exact);

}  // namespace madasub
