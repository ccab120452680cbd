#pragma once

// Umbrella header: the exact relevance-certification toolkit.

#include "relcert/rational.hpp"
#include "relcert/errors.hpp"
#include "relcert/space.hpp"
#include "relcert/problem.hpp"
#include "relcert/certify.hpp"
#include "relcert/realizability.hpp"
#include "relcert/pairwise.hpp"
#include "relcert/closure.hpp"
#include "relcert/obstruction.hpp"
#include "relcert/classifier.hpp"
#include "relcert/reductions.hpp"
#include "relcert/stability.hpp"
#include "relcert/taxonomy.hpp"
#include "relcert/io.hpp"
