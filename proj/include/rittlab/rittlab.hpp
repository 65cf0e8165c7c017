#pragma once

#include "rittlab/core.hpp"
#include "rittlab/dilation.hpp"
#include "rittlab/funcalc.hpp"
#include "rittlab/gallery.hpp"
#include "rittlab/json_io.hpp"
#include "rittlab/lpcore.hpp"
#include "rittlab/multiplier.hpp"
#include "rittlab/quadrature.hpp"
#include "rittlab/randseq.hpp"
#include "rittlab/ritt.hpp"
#include "rittlab/schur.hpp"
#include "rittlab/squarefn.hpp"
