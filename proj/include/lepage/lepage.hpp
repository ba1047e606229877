#pragma once

// Umbrella header for the whole toolkit.

#include "lepage/error.hpp"
#include "lepage/jet_space.hpp"
#include "lepage/expr.hpp"
#include "lepage/canonical.hpp"
#include "lepage/printer.hpp"
#include "lepage/parser.hpp"
#include "lepage/calculus.hpp"
#include "lepage/numeric.hpp"
#include "lepage/jet_calculus.hpp"
#include "lepage/forms.hpp"
#include "lepage/form_printer.hpp"
#include "lepage/variational.hpp"
#include "lepage/globalization.hpp"
#include "lepage/homogeneity.hpp"
#include "lepage/system_file.hpp"
