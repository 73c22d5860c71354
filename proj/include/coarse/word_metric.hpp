#pragma once

#include <memory>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

// Groups with trivially decidable word problem.
//   free_abelian: Z^rank, elements are integer vectors of length rank.
//   free:         free group of the given rank, elements are reduced words
//                 over letters +-1..+-rank (-k is the inverse of k).
enum class GroupModel { free_abelian, free };

using GroupElement = std::vector<int>;

struct WordBall {
  std::shared_ptr<MatrixSpace> space;
  std::vector<GroupElement> elements;  // elements[i] is point i; point 0 is the identity
  std::vector<unsigned> length;        // word length of each element
};

GroupElement group_multiply(GroupModel m, const GroupElement& a, const GroupElement& b);
GroupElement group_inverse(GroupModel m, const GroupElement& a);
GroupElement group_identity(GroupModel m, unsigned rank);

// Ball of the given radius about the identity in the word metric of the
// symmetric closure of the generators, found by breadth-first search of the
// Cayley graph. Distances d(g,h) = |g^{-1}h| are exact.
WordBall word_metric_ball(GroupModel model, unsigned rank, const std::vector<GroupElement>& generators,
                          unsigned radius);

}  // namespace coarse
