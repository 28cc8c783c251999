#pragma once

#include "endoscope/errors.hpp"
#include "endoscope/cyclo.hpp"
#include "endoscope/ffield.hpp"
#include "endoscope/checks.hpp"
#include "endoscope/expsum.hpp"
#include "endoscope/padic.hpp"
#include "endoscope/iwahori.hpp"
#include "endoscope/sschar.hpp"
#include "endoscope/endoscopy.hpp"
