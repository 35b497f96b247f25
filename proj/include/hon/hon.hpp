#pragma once

#include "hon/betweenness.hpp"
#include "hon/error.hpp"
#include "hon/evaluation.hpp"
#include "hon/gamma.hpp"
#include "hon/graph.hpp"
#include "hon/ground_truth.hpp"
#include "hon/labels.hpp"
#include "hon/metrics.hpp"
#include "hon/model.hpp"
#include "hon/model_io.hpp"
#include "hon/multi_order.hpp"
#include "hon/pagerank.hpp"
#include "hon/parallel.hpp"
#include "hon/prediction.hpp"
#include "hon/random.hpp"
#include "hon/scores.hpp"
#include "hon/shortest_paths.hpp"
#include "hon/synth.hpp"
#include "hon/trajectory.hpp"
