#pragma once

#include "polyreal/error.hpp"
#include "polyreal/relation.hpp"
#include "polyreal/lattice.hpp"
#include "polyreal/families.hpp"
#include "polyreal/linalg.hpp"
#include "polyreal/lp.hpp"
#include "polyreal/realize.hpp"
#include "polyreal/complete.hpp"
#include "polyreal/verdict.hpp"
#include "polyreal/gramian.hpp"
#include "polyreal/gale.hpp"
#include "polyreal/io.hpp"
