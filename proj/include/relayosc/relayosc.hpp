#pragma once

#include "relayosc/analyzer.hpp"
#include "relayosc/certificates.hpp"
#include "relayosc/config.hpp"
#include "relayosc/io.hpp"
#include "relayosc/lti.hpp"
#include "relayosc/parallel.hpp"
#include "relayosc/simulator.hpp"
#include "relayosc/variation.hpp"
