#pragma once

#include "persnet/es.hpp"
#include "persnet/pnet.hpp"

#include <cstddef>
#include <random>

namespace gen {

using Rng = std::mt19937_64;

struct NetShape {
  std::size_t places = 5;
  std::size_t persistent = 1;
  std::size_t transitions = 5;
  std::size_t max_pre = 2;
  std::size_t max_post = 2;
  double mark = 0.5;
};

/// Random well-formed p-net of the given shape.
persnet::PNet pnet(Rng& rng, const NetShape& shape);

/// Random occurrence p-net with 1..max_events events, built event by event
/// and kept only if it validates. Without persistence all conditions are
/// non-persistent.
persnet::PNet occnet(Rng& rng, std::size_t max_events, bool persistence = true);

/// Random event structure; may be neither live nor locally connected.
persnet::EventStructure es(Rng& rng, std::size_t events);
persnet::EventStructure live_es(Rng& rng, std::size_t max_events);
persnet::EventStructure locally_connected_es(Rng& rng, std::size_t max_events);

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p);

}  // namespace gen
