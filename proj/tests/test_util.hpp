#pragma once

#include "pcross/crossed_product.hpp"
#include "pcross/rng.hpp"

namespace pcross::testutil {

inline AlgebraElement random_element(Rng& rng, const BlockShape& shape) {
  AlgebraElement a = AlgebraElement::zero(shape);
  for (int i = 0; i < shape.block_count(); ++i)
    a.block(i) = rng.gaussian_matrix(shape.dim(i), shape.dim(i));
  return a;
}

inline AlgebraElement random_element_in(Rng& rng, const BlockShape& shape, const Ideal& ideal) {
  AlgebraElement a = AlgebraElement::zero(shape);
  for (int i : ideal.support) a.block(i) = rng.gaussian_matrix(shape.dim(i), shape.dim(i));
  return a;
}

inline CrossedElement random_crossed(Rng& rng, const CrossedProduct& cp) {
  Vector coords(cp.dim());
  for (int j = 0; j < cp.dim(); ++j) coords(j) = rng.complex_normal();
  return cp.element(coords);
}

}  // namespace pcross::testutil
