#include "sphereprobe/free_group.hpp"

#include <algorithm>
#include <cstdlib>

namespace sphereprobe {

Word inverse(std::span<const int> w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word concat(std::span<const int> a, std::span<const int> b) {
  Word out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word reduce(std::span<const int> w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

Word cyclic_reduce(std::span<const int> w) {
  Word r = reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

FreeMorphism::FreeMorphism(std::vector<Word> images) : images_(std::move(images)) {
  for (auto& im : images_) im = reduce(im);
}

FreeMorphism FreeMorphism::identity(int rank) {
  std::vector<Word> images;
  for (int k = 1; k <= rank; ++k) images.push_back({k});
  return FreeMorphism(std::move(images));
}

Word FreeMorphism::apply(std::span<const int> w) const {
  Word out;
  for (int x : w) {
    const Word& im = images_[std::abs(x) - 1];
    if (x > 0) {
      for (int y : im) {
        if (!out.empty() && out.back() == -y) out.pop_back(); else out.push_back(y);
      }
    } else {
      for (auto it = im.rbegin(); it != im.rend(); ++it) {
        int y = -*it;
        if (!out.empty() && out.back() == -y) out.pop_back(); else out.push_back(y);
      }
    }
  }
  return out;
}

FreeMorphism FreeMorphism::compose(const FreeMorphism& other) const {
  std::vector<Word> images;
  images.reserve(other.images_.size());
  for (const auto& im : other.images_) images.push_back(apply(im));
  return FreeMorphism(std::move(images));
}

}  // namespace sphereprobe
