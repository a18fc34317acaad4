#pragma once

#include "pasq/error.hpp"
#include "pasq/special.hpp"
#include "pasq/fock.hpp"
#include "pasq/gaussian.hpp"
#include "pasq/grid.hpp"
#include "pasq/phasespace.hpp"
#include "pasq/verify.hpp"
