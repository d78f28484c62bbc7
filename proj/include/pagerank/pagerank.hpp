#pragma once

#include "pagerank/baseline.hpp"
#include "pagerank/errors.hpp"
#include "pagerank/gk.hpp"
#include "pagerank/graph.hpp"
#include "pagerank/graph_gen.hpp"
#include "pagerank/mcmc.hpp"
#include "pagerank/metrics.hpp"
#include "pagerank/rank_vector.hpp"
#include "pagerank/rng.hpp"
#include "pagerank/row_sampler.hpp"
#include "pagerank/stochastic_matrix.hpp"
#include "pagerank/weight_tree.hpp"
