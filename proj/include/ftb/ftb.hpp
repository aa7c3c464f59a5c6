#pragma once

// Point-wise tangent-bundle geometry of Finsler manifolds: adapted frames,
// the Sasaki lift metric, its Levi-Civita connection (closed form vs a
// Koszul oracle), natural foliations, and the contact structure of the
// indicatrix bundle.

#include "ftb/config.hpp"
#include "ftb/contact.hpp"
#include "ftb/dual.hpp"
#include "ftb/errors.hpp"
#include "ftb/fields.hpp"
#include "ftb/finsler.hpp"
#include "ftb/foliation.hpp"
#include "ftb/frame.hpp"
#include "ftb/linalg.hpp"
#include "ftb/metrics.hpp"
#include "ftb/parallel.hpp"
#include "ftb/point.hpp"
#include "ftb/report.hpp"
#include "ftb/runner.hpp"
#include "ftb/sampling.hpp"
#include "ftb/sasaki.hpp"
#include "ftb/spray.hpp"
#include "ftb/vector_field.hpp"
