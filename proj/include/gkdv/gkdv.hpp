#pragma once

#include "gkdv/background.hpp"
#include "gkdv/cli.hpp"
#include "gkdv/diagnostics.hpp"
#include "gkdv/elliptic.hpp"
#include "gkdv/error.hpp"
#include "gkdv/fft.hpp"
#include "gkdv/flux.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/io.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/scenario.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/spectral.hpp"
#include "gkdv/taylor.hpp"
