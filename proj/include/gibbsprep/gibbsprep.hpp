#pragma once

// Variational Gibbs-state preparation by free-energy minimization:
// dense density-matrix simulation, certified Fourier-series entropy
// estimation, LCU energy estimation, query-cost models, and the
// Trotterized adiabatic ansatz with Powell / gradient-descent optimizers.

#include "gibbsprep/ansatz.hpp"
#include "gibbsprep/circuits.hpp"
#include "gibbsprep/common.hpp"
#include "gibbsprep/fourierlog.hpp"
#include "gibbsprep/hamiltonians.hpp"
#include "gibbsprep/io.hpp"
#include "gibbsprep/numkernel.hpp"
#include "gibbsprep/parallel.hpp"
#include "gibbsprep/random.hpp"
#include "gibbsprep/variational.hpp"
