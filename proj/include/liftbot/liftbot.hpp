#pragma once

#include "liftbot/bus.hpp"
#include "liftbot/cli.hpp"
#include "liftbot/controller.hpp"
#include "liftbot/demos.hpp"
#include "liftbot/event_core.hpp"
#include "liftbot/fields.hpp"
#include "liftbot/memory.hpp"
#include "liftbot/prng.hpp"
#include "liftbot/registry.hpp"
#include "liftbot/render.hpp"
#include "liftbot/robot_api.hpp"
#include "liftbot/runtime.hpp"
#include "liftbot/simulator.hpp"
#include "liftbot/task.hpp"
#include "liftbot/trace.hpp"
#include "liftbot/wrappers.hpp"
