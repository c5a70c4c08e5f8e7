#pragma once

#include "mgibbs/error.hpp"
#include "mgibbs/numeric.hpp"
#include "mgibbs/parallel.hpp"
#include "mgibbs/rng.hpp"
#include "mgibbs/model.hpp"
#include "mgibbs/combinat.hpp"
#include "mgibbs/starcalc.hpp"
#include "mgibbs/potential.hpp"
#include "mgibbs/registry.hpp"
#include "mgibbs/quadrature.hpp"
#include "mgibbs/conditions.hpp"
#include "mgibbs/lpintegrate.hpp"
#include "mgibbs/ursell.hpp"
#include "mgibbs/tree_bound.hpp"
#include "mgibbs/expansion.hpp"
#include "mgibbs/gibbsmc.hpp"
#include "mgibbs/config.hpp"
#include "mgibbs/report.hpp"
#include "mgibbs/verify.hpp"
#include "mgibbs/cli.hpp"
