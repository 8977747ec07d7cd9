#pragma once

#include "algebra.hpp"
#include "config.hpp"
#include "diagram.hpp"
#include "errors.hpp"
#include "expression.hpp"
#include "fock.hpp"
#include "io.hpp"
#include "jones_wenzl.hpp"
#include "pair.hpp"
#include "presentation.hpp"
#include "qpoly.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "representation.hpp"
