#pragma once

#include "fmosim/channels.hpp"
#include "fmosim/circuit.hpp"
#include "fmosim/circuit_text.hpp"
#include "fmosim/dynamics.hpp"
#include "fmosim/hamiltonians.hpp"
#include "fmosim/io.hpp"
#include "fmosim/kraus.hpp"
#include "fmosim/nmr_compiler.hpp"
#include "fmosim/qcore.hpp"
#include "fmosim/tolerances.hpp"
