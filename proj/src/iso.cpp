#include "persnet/iso.hpp"

#include "persnet/bitset.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace persnet {

namespace {

// Items of the disjoint union: places of a, transitions of a, places of b,
// transitions of b.
struct Union {
  const PNet& a;
  const PNet& b;
  std::size_t na, nb;

  Union(const PNet& a_, const PNet& b_)
      : a(a_), b(b_),
        na(a_.num_places() + a_.num_transitions()),
        nb(b_.num_places() + b_.num_transitions()) {}

  std::size_t size() const { return na + nb; }
};

using Neighbours = std::vector<std::vector<std::pair<int, std::size_t>>>;

// Arc kinds: 0 = place in pre-set of, 1 = place in post-set of, 2 and 3 the
// same arcs seen from the transition.
void add_net(const PNet& n, std::size_t offset, Neighbours& adj) {
  const std::size_t np = n.num_places();
  for (TransId t = 0; t < n.num_transitions(); ++t) {
    const std::size_t ti = offset + np + t;
    for (PlaceId p : n.pre(t)) {
      adj[offset + p].push_back({0, ti});
      adj[ti].push_back({2, offset + p});
    }
    for (PlaceId p : n.post(t)) {
      adj[offset + p].push_back({1, ti});
      adj[ti].push_back({3, offset + p});
    }
  }
}

int base_colour(const PNet& n, std::size_t item) {
  if (item >= n.num_places()) return 0;
  if (n.persistent(item)) return 1;
  return n.initial().contains(item) ? 3 : 2;
}

std::vector<std::size_t> refine(const Union& u) {
  Neighbours adj(u.size());
  add_net(u.a, 0, adj);
  add_net(u.b, u.na, adj);

  std::vector<std::size_t> colour(u.size());
  for (std::size_t i = 0; i < u.na; ++i) colour[i] = base_colour(u.a, i);
  for (std::size_t i = 0; i < u.nb; ++i) colour[u.na + i] = base_colour(u.b, i);

  std::size_t classes = 0;
  for (;;) {
    using Signature = std::pair<std::size_t, std::vector<std::pair<int, std::size_t>>>;
    std::map<Signature, std::size_t> ids;
    std::vector<std::size_t> next(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      Signature sig{colour[i], {}};
      for (auto [kind, j] : adj[i]) sig.second.push_back({kind, colour[j]});
      std::sort(sig.second.begin(), sig.second.end());
      next[i] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    colour = std::move(next);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return colour;
}

class Search {
public:
  Search(const PNet& a, const PNet& b, std::vector<std::size_t> colour,
         std::size_t budget)
      : a_(a), b_(b), na_(a.num_places() + a.num_transitions()),
        colour_(std::move(colour)), budget_(budget) {
    pre_a_ = incidence(a, true);
    post_a_ = incidence(a, false);
    pre_b_ = incidence(b, true);
    post_b_ = incidence(b, false);
    order_items();
    image_.assign(na_, kNone);
    used_.assign(na_, false);
  }

  IsoResult run() {
    IsoResult r;
    const bool found = extend(0);
    if (found) {
      r.verdict = Verdict::Yes;
      const std::size_t np = a_.num_places();
      for (std::size_t i = 0; i < np; ++i) r.witness.places.push_back(image_[i]);
      for (std::size_t i = np; i < na_; ++i)
        r.witness.transitions.push_back(image_[i] - b_.num_places());
    } else {
      r.verdict = exhausted_ ? Verdict::Unknown : Verdict::No;
    }
    return r;
  }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Row per transition, column per place.
  static std::vector<IndexSet> incidence(const PNet& n, bool pre) {
    std::vector<IndexSet> rows(n.num_transitions(), IndexSet(n.num_places()));
    for (TransId t = 0; t < n.num_transitions(); ++t)
      for (PlaceId p : pre ? n.pre(t) : n.post(t)) rows[t].set(p);
    return rows;
  }

  bool is_place_a(std::size_t i) const { return i < a_.num_places(); }

  bool linked(std::size_t x, std::size_t y, bool in_a, bool pre) const {
    // x and y are items of one net, one place and one transition.
    const PNet& n = in_a ? a_ : b_;
    const auto& rows = in_a ? (pre ? pre_a_ : post_a_) : (pre ? pre_b_ : post_b_);
    const std::size_t np = n.num_places();
    if (x < np) return rows[y - np].test(x);
    return rows[x - np].test(y);
  }

  // Most constrained first: prefer items adjacent to already ordered ones,
  // then small colour classes.
  void order_items() {
    std::map<std::size_t, std::size_t> class_size;
    for (std::size_t i = 0; i < na_; ++i) ++class_size[colour_[i]];
    std::vector<bool> placed(na_, false);
    std::vector<std::size_t> links(na_, 0);
    for (std::size_t step = 0; step < na_; ++step) {
      std::size_t best = kNone;
      for (std::size_t i = 0; i < na_; ++i) {
        if (placed[i]) continue;
        if (best == kNone ||
            std::make_tuple(-static_cast<long>(links[i]), class_size[colour_[i]], i) <
                std::make_tuple(-static_cast<long>(links[best]),
                                class_size[colour_[best]], best))
          best = i;
      }
      placed[best] = true;
      order_.push_back(best);
      for (std::size_t j = 0; j < na_; ++j)
        if (!placed[j] && is_place_a(j) != is_place_a(best) &&
            (linked(best, j, true, true) || linked(best, j, true, false)))
          ++links[j];
    }
  }

  bool consistent(std::size_t x, std::size_t y) const {
    for (std::size_t k = 0; k < depth_; ++k) {
      const std::size_t x2 = order_[k];
      if (is_place_a(x2) == is_place_a(x)) continue;
      // Images are stored as items of b.
      const std::size_t yb = y - na_, y2b = image_[x2];
      if (linked(x, x2, true, true) != linked(yb, y2b, false, true)) return false;
      if (linked(x, x2, true, false) != linked(yb, y2b, false, false)) return false;
    }
    return true;
  }

  bool extend(std::size_t k) {
    if (k == order_.size()) return true;
    const std::size_t x = order_[k];
    const std::size_t nb = b_.num_places() + b_.num_transitions();
    for (std::size_t yb = 0; yb < nb; ++yb) {
      const std::size_t y = na_ + yb;
      if (used_[yb] || colour_[y] != colour_[x]) continue;
      if (budget_ == 0) {
        exhausted_ = true;
        return false;
      }
      --budget_;
      depth_ = k;
      if (!consistent(x, y)) continue;
      image_[x] = yb;
      used_[yb] = true;
      if (extend(k + 1)) return true;
      used_[yb] = false;
      image_[x] = kNone;
      if (exhausted_) return false;
    }
    return false;
  }

  const PNet& a_;
  const PNet& b_;
  std::size_t na_;
  std::vector<std::size_t> colour_;
  std::size_t budget_;
  bool exhausted_ = false;
  std::size_t depth_ = 0;
  std::vector<IndexSet> pre_a_, post_a_, pre_b_, post_b_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> image_;
  std::vector<bool> used_;
};

}  // namespace

IsoResult iso_check(const PNet& a, const PNet& b, std::size_t budget) {
  IsoResult r;
  if (a.num_places() != b.num_places() ||
      a.num_transitions() != b.num_transitions() ||
      a.num_persistent() != b.num_persistent())
    return r;

  const Union u(a, b);
  const auto colour = refine(u);
  std::map<std::size_t, long> balance;
  for (std::size_t i = 0; i < u.na; ++i) ++balance[colour[i]];
  for (std::size_t i = 0; i < u.nb; ++i) --balance[colour[u.na + i]];
  for (auto [c, d] : balance)
    if (d != 0) return r;

  // Image indices inside Search are items of b (places then transitions).
  return Search(a, b, colour, budget).run();
}

bool is_isomorphism(const PNet& a, const PNet& b, const NetIsomorphism& f) {
  if (a.num_places() != b.num_places() ||
      a.num_transitions() != b.num_transitions() ||
      f.places.size() != a.num_places() ||
      f.transitions.size() != a.num_transitions())
    return false;
  std::vector<bool> hit_p(b.num_places(), false), hit_t(b.num_transitions(), false);
  for (PlaceId p = 0; p < a.num_places(); ++p) {
    const PlaceId q = f.places[p];
    if (q >= b.num_places() || hit_p[q]) return false;
    hit_p[q] = true;
    if (a.persistent(p) != b.persistent(q)) return false;
    if (a.initial().contains(p) != b.initial().contains(q)) return false;
  }
  auto image = [&](const std::vector<PlaceId>& xs) {
    std::vector<PlaceId> out;
    for (PlaceId x : xs) out.push_back(f.places[x]);
    std::sort(out.begin(), out.end());
    return out;
  };
  for (TransId t = 0; t < a.num_transitions(); ++t) {
    const TransId u = f.transitions[t];
    if (u >= b.num_transitions() || hit_t[u]) return false;
    hit_t[u] = true;
    if (image(a.pre(t)) != b.pre(u) || image(a.post(t)) != b.post(u)) return false;
  }
  return true;
}

}  // namespace persnet
