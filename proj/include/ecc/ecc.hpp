#ifndef ECC_ECC_HPP_
#define ECC_ECC_HPP_

#include "ecc/chi.hpp"
#include "ecc/config.hpp"
#include "ecc/curves.hpp"
#include "ecc/error.hpp"
#include "ecc/estimators.hpp"
#include "ecc/io.hpp"
#include "ecc/parallel.hpp"
#include "ecc/pipeline.hpp"
#include "ecc/simulate.hpp"
#include "ecc/tail.hpp"
#include "ecc/transform.hpp"

#endif // ECC_ECC_HPP_
