#ifndef RBSIM_RBSIM_HPP
#define RBSIM_RBSIM_HPP

// Umbrella header for the DC rail corridor regenerative-braking simulator.

#include "rbsim/chopper.hpp"
#include "rbsim/drivetrain.hpp"
#include "rbsim/dtc.hpp"
#include "rbsim/errors.hpp"
#include "rbsim/induction_machine.hpp"
#include "rbsim/network_solver.hpp"
#include "rbsim/rail_network.hpp"
#include "rbsim/scenario.hpp"
#include "rbsim/sim_engine.hpp"
#include "rbsim/sim_types.hpp"
#include "rbsim/speed_profile.hpp"
#include "rbsim/substation.hpp"
#include "rbsim/timeseries.hpp"
#include "rbsim/traction_drive.hpp"
#include "rbsim/units.hpp"
#include "rbsim/vehicle_dynamics.hpp"

#endif
