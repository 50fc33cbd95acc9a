#pragma once

#include "slicelab/admissible.hpp"
#include "slicelab/anticoncentration.hpp"
#include "slicelab/campaign.hpp"
#include "slicelab/config.hpp"
#include "slicelab/errors.hpp"
#include "slicelab/exact_linalg.hpp"
#include "slicelab/numeric_linalg.hpp"
#include "slicelab/rational.hpp"
#include "slicelab/rng.hpp"
#include "slicelab/rounding.hpp"
#include "slicelab/sampling.hpp"
#include "slicelab/smoothing.hpp"
#include "slicelab/structured.hpp"
#include "slicelab/types.hpp"
