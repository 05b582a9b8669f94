#pragma once

#include "dkspin/algebra.hpp"
#include "dkspin/decomposition.hpp"
#include "dkspin/dynamics.hpp"
#include "dkspin/identities.hpp"
#include "dkspin/lorentz.hpp"
#include "dkspin/random.hpp"
#include "dkspin/sectors.hpp"
