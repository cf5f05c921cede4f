#include "sphereprobe/mapping_class.hpp"

#include <cstdlib>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "sphereprobe/error.hpp"

namespace sphereprobe {

namespace {

// The braid-style substitution A -> A B A^-1, B -> A (A, B the loops at
// positions m+1, m) turns the right way round for the half twist fixed by
// the convention; the reverse substitution is its inverse.
constexpr bool kForwardIsPositive = false;

struct GeneratorTable {
  std::vector<FreeMorphism> forward;
  std::vector<FreeMorphism> backward;
};

// Rewrite a word in the puncture loops y_0..y_{n-1} (letters ±(j+1)) in the
// free basis of the surface.
Word loops_to_basis(const Surface& s, std::span<const int> yw) {
  Word out;
  for (int x : yw) {
    Word y = s.puncture_loop(std::abs(x) - 1);
    if (x < 0) y = inverse(y);
    out.insert(out.end(), y.begin(), y.end());
  }
  return reduce(out);
}

FreeMorphism build_generator(const Surface& s, int m, bool forward) {
  const int n = s.punctures();
  const int a = (m + 1) % n + 1;  // y letter ids are position + 1
  const int b = m + 1;
  std::vector<Word> y_image(n);
  for (int j = 0; j < n; ++j) y_image[j] = {j + 1};
  if (forward) {
    y_image[a - 1] = {a, b, -a};
    y_image[b - 1] = {a};
  } else {
    y_image[a - 1] = {b};
    y_image[b - 1] = {-b, a, b};
  }
  std::vector<Word> g_images;
  for (int k = 1; k <= n - 1; ++k) {
    Word yw;
    for (int j = k; j >= 1; --j) yw.insert(yw.end(), y_image[j].begin(), y_image[j].end());
    g_images.push_back(loops_to_basis(s, yw));
  }
  return FreeMorphism(std::move(g_images));
}

const GeneratorTable& generators(const Surface& s) {
  // The substitutions depend only on positions, so one table per n.
  static const auto make = [](int n) {
    auto surf = Surface::build(n, n == 5 ? std::vector<int>{1, 2, 3, 4, 5} : std::vector<int>{1, 2, 3, 4, 5, 6});
    GeneratorTable t;
    for (int m = 0; m < n; ++m) {
      t.forward.push_back(build_generator(*surf, m, kForwardIsPositive));
      t.backward.push_back(build_generator(*surf, m, !kForwardIsPositive));
    }
    return t;
  };
  static const GeneratorTable five = make(5);
  static const GeneratorTable six = make(6);
  return s.punctures() == 5 ? five : six;
}

}  // namespace

MappingClassWord MappingClassWord::generator(SurfacePtr s, int m, int exp) {
  if (m < 0 || m >= s->punctures()) throw Error(ErrorCode::InvalidArgument, "half-twist generator out of range");
  MappingClassWord w(std::move(s));
  w.push(m, exp);
  return w;
}

void MappingClassWord::push(int gen, int exp) {
  if (exp == 0) return;
  if (!letters_.empty() && letters_.back().gen == gen) {
    letters_.back().exp += exp;
    if (letters_.back().exp == 0) letters_.pop_back();
    return;
  }
  letters_.push_back({gen, exp});
}

int MappingClassWord::letter_count() const {
  int c = 0;
  for (const auto& l : letters_) c += std::abs(l.exp);
  return c;
}

MappingClassWord MappingClassWord::operator*(const MappingClassWord& o) const {
  if (surface_ && o.surface_ && !surface_->same_as(*o.surface_)) {
    throw Error(ErrorCode::MismatchedSurface, "composing words on different surfaces");
  }
  MappingClassWord r(surface_ ? surface_ : o.surface_);
  r.letters_ = letters_;
  for (const auto& l : o.letters_) r.push(l.gen, l.exp);
  return r;
}

MappingClassWord MappingClassWord::inverse() const {
  MappingClassWord r(surface_);
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.push(it->gen, -it->exp);
  return r;
}

MappingClassWord MappingClassWord::power(int k) const {
  MappingClassWord base = k < 0 ? inverse() : *this;
  MappingClassWord r(surface_);
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}

Word MappingClassWord::apply_word(std::span<const int> w) const {
  Word cur = cyclic_reduce(w);
  if (!surface_) return cur;
  const auto& table = generators(*surface_);
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    const FreeMorphism& f = it->exp > 0 ? table.forward[it->gen] : table.backward[it->gen];
    for (int k = 0; k < std::abs(it->exp); ++k) cur = cyclic_reduce(f.apply(cur));
  }
  return cur;
}

Curve MappingClassWord::apply(const Curve& a) const {
  if (letters_.empty()) return a;
  if (!a.surface()->same_as(*surface_)) throw Error(ErrorCode::MismatchedSurface, "word and curve on different surfaces");
  return Curve::from_word(a.surface(), apply_word(a.word()));
}

Standardization standardize(const Curve& a, int max_expansions) {
  const SurfacePtr& s = a.surface();
  const int n = s->punctures();
  const int size = a.is_pants() ? 2 : 3;
  std::map<std::vector<int>, int> targets;
  for (int m = 0; m < n; ++m) targets.emplace(block_curve(s, m, size).coords(), m);

  struct Back {
    std::vector<int> parent;
    int gen;
    int exp;
  };
  std::map<std::vector<int>, Back> seen;
  using Item = std::tuple<int, std::vector<int>>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::map<std::vector<int>, Curve> curves;
  seen.emplace(a.coords(), Back{{}, -1, 0});
  curves.emplace(a.coords(), a);
  open.emplace(a.weight(), a.coords());
  int expansions = 0;
  while (!open.empty()) {
    auto [w, key] = open.top();
    open.pop();
    auto hit = targets.find(key);
    if (hit != targets.end()) {
      // key = g(a) for the recorded moves g; a = g^-1(block).
      MappingClassWord g(s);
      for (std::vector<int> k = key; seen.at(k).gen >= 0; k = seen.at(k).parent) {
        const auto& b = seen.at(k);
        g = g * MappingClassWord::generator(s, b.gen, b.exp);
      }
      return Standardization{g.inverse(), hit->second, size};
    }
    if (++expansions > max_expansions) {
      throw Error(ErrorCode::ResourceCap, "standardization search exceeded " + std::to_string(max_expansions) + " expansions");
    }
    const Curve cur = curves.at(key);
    curves.erase(key);
    for (int m = 0; m < n; ++m) {
      for (int e : {1, -1}) {
        Curve next = MappingClassWord::generator(s, m, e).apply(cur);
        if (seen.count(next.coords())) continue;
        seen.emplace(next.coords(), Back{key, m, e});
        open.emplace(next.weight(), next.coords());
        curves.emplace(next.coords(), std::move(next));
      }
    }
  }
  throw Error(ErrorCode::AuditFailure, "standardization search ran out of states");
}

MappingClassWord half_twist_word(const Curve& c, int n) {
  if (!c.is_pants()) throw Error(ErrorCode::NotPants, "half twist needs a curve bounding two punctures");
  Standardization st = standardize(c);
  const SurfacePtr& s = c.surface();
  return st.h * MappingClassWord::generator(s, st.position, n) * st.h.inverse();
}

MappingClassWord dehn_twist_word(const Curve& a, int n) {
  Standardization st = standardize(a);
  const SurfacePtr& s = a.surface();
  const int np = s->punctures();
  MappingClassWord full(s);
  for (int r = 0; r < st.size; ++r) {
    for (int j = 0; j < st.size - 1; ++j) full = full * MappingClassWord::generator(s, (st.position + j) % np, 1);
  }
  return st.h * full.power(n * kHalfTwistSquareSign) * st.h.inverse();
}

Curve half_twist(const Curve& c, int n, const Curve& b) {
  require_same_surface(c, b);
  if (n == 0) return b;
  return half_twist_word(c, n).apply(b);
}

Curve dehn_twist(const Curve& a, int n, const Curve& b) {
  require_same_surface(a, b);
  if (n == 0) return b;
  return dehn_twist_word(a, n).apply(b);
}

}  // namespace sphereprobe
