// becmon.hpp — umbrella include

#pragma once

#include "becmon/bloch.hpp"
#include "becmon/config.hpp"
#include "becmon/ensemble.hpp"
#include "becmon/gpe.hpp"
#include "becmon/lindblad.hpp"
#include "becmon/model.hpp"
#include "becmon/observables.hpp"
#include "becmon/quadrature.hpp"
#include "becmon/record.hpp"
#include "becmon/rng.hpp"
#include "becmon/run.hpp"
#include "becmon/spin_space.hpp"
#include "becmon/state.hpp"
#include "becmon/state_io.hpp"
#include "becmon/tensor_ops.hpp"
#include "becmon/trajectory.hpp"
#include "becmon/types.hpp"
#include "becmon/unitary.hpp"
#include "becmon/version.hpp"
#include "becmon/wigner.hpp"
