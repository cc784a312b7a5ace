#ifndef MODSET_MODSET_HPP
#define MODSET_MODSET_HPP

#include <modset/certificates.hpp>
#include <modset/families.hpp>
#include <modset/int_poly.hpp>
#include <modset/io.hpp>
#include <modset/modular.hpp>
#include <modset/multilinear.hpp>
#include <modset/search.hpp>

#endif
