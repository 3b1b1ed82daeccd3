#pragma once

// Umbrella header: the whole linker-demarcation pipeline.

#include "linkerscout/clustering.hpp"
#include "linkerscout/common.hpp"
#include "linkerscout/demarcation.hpp"
#include "linkerscout/evaluation.hpp"
#include "linkerscout/geometry.hpp"
#include "linkerscout/invariants.hpp"
#include "linkerscout/lpr.hpp"
#include "linkerscout/matrix.hpp"
#include "linkerscout/parallel.hpp"
#include "linkerscout/pca.hpp"
#include "linkerscout/pdb.hpp"
#include "linkerscout/pipeline.hpp"
#include "linkerscout/scoring.hpp"
#include "linkerscout/structure.hpp"
