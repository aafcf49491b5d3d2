#pragma once

#include "padt/classifier.hpp"
#include "padt/dendrogram.hpp"
#include "padt/error.hpp"
#include "padt/flag_graph.hpp"
#include "padt/json_io.hpp"
#include "padt/padic.hpp"
#include "padt/rational.hpp"
#include "padt/residue_field.hpp"
#include "padt/string_encoder.hpp"
#include "padt/symbolic.hpp"
#include "padt/timeseries.hpp"
#include "padt/tree_invariants.hpp"
