#pragma once

#include "subplanck/decoherence.hpp"
#include "subplanck/dynamics.hpp"
#include "subplanck/error.hpp"
#include "subplanck/grid.hpp"
#include "subplanck/io.hpp"
#include "subplanck/parallel.hpp"
#include "subplanck/states.hpp"
#include "subplanck/wigner.hpp"
