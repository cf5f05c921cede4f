#pragma once

#include <span>
#include <vector>

namespace sphereprobe {

// Words in a free group. A letter is a nonzero integer: +k is the k-th
// generator, -k its inverse.
using Word = std::vector<int>;

Word inverse(std::span<const int> w);
Word concat(std::span<const int> a, std::span<const int> b);

// Free reduction (cancels adjacent x x^-1).
Word reduce(std::span<const int> w);
// Free reduction followed by cyclic trimming.
Word cyclic_reduce(std::span<const int> w);

// An endomorphism of the free group given by the images of generators
// 1..rank. Images are stored reduced.
class FreeMorphism {
 public:
  FreeMorphism() = default;
  explicit FreeMorphism(std::vector<Word> images);

  static FreeMorphism identity(int rank);

  int rank() const { return static_cast<int>(images_.size()); }
  const Word& image(int generator) const { return images_[generator - 1]; }

  Word apply(std::span<const int> w) const;
  // this ∘ other
  FreeMorphism compose(const FreeMorphism& other) const;

 private:
  std::vector<Word> images_;
};

}  // namespace sphereprobe
