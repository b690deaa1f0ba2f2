#include "fusionclust/fusion_path.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Binary min-heap over adjacent pairs, each pair keyed by the slot of its
// left cluster. Keys change in place, so the heap never holds more than one
// entry per live pair. Ties go to the leftmost pair.
class PairHeap {
 public:
  explicit PairHeap(std::size_t slots) : position_(slots, kNone) { heap_.reserve(slots); }

  bool empty() const noexcept { return heap_.empty(); }
  std::uint32_t top() const noexcept { return heap_.front().pair; }

  // Appends without ordering; call heapify() once all initial pairs are in.
  void append(std::uint32_t pair, double key) {
    position_[pair] = static_cast<std::uint32_t>(heap_.size());
    heap_.push_back({key, pair});
  }

  void heapify() {
    for (std::size_t i = heap_.size() / 2; i-- > 0;) sift_down(i, heap_[i]);
  }

  void update(std::uint32_t pair, double key) {
    const std::size_t i = position_[pair];
    const Entry e{key, pair};
    if (i > 0 && before(e, heap_[(i - 1) / 2])) {
      sift_up(i, e);
    } else {
      sift_down(i, e);
    }
  }

  void erase(std::uint32_t pair) {
    const std::size_t i = position_[pair];
    position_[pair] = kNone;
    const Entry last = heap_.back();
    heap_.pop_back();
    if (i == heap_.size()) return;
    if (i > 0 && before(last, heap_[(i - 1) / 2])) {
      sift_up(i, last);
    } else {
      sift_down(i, last);
    }
  }

  bool contains(std::uint32_t pair) const noexcept { return position_[pair] != kNone; }

 private:
  struct Entry {
    double key;
    std::uint32_t pair;
  };

  static bool before(const Entry& a, const Entry& b) noexcept {
    if (a.key != b.key) return a.key < b.key;
    return a.pair < b.pair;
  }

  void place(std::size_t i, const Entry& e) noexcept {
    heap_[i] = e;
    position_[e.pair] = static_cast<std::uint32_t>(i);
  }

  void sift_up(std::size_t i, Entry e) noexcept {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!before(e, heap_[parent])) break;
      place(i, heap_[parent]);
      i = parent;
    }
    place(i, e);
  }

  void sift_down(std::size_t i, Entry e) noexcept {
    const std::size_t n = heap_.size();
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], e)) break;
      place(i, heap_[child]);
      i = child;
    }
    place(i, e);
  }

  std::vector<Entry> heap_;
  std::vector<std::uint32_t> position_;
};

// Live cluster keyed by its first entry index; two per cache line.
struct alignas(32) Slot {
  ExactSum sum;
  std::uint32_t size = 0;
  std::uint32_t end = 0;
  std::uint32_t next = kNone;
  std::uint32_t prev = kNone;
};

MergeEvent make_event(const SortedSample& sample, std::size_t first, std::size_t split,
                      std::size_t last, std::size_t left_size, std::size_t right_size,
                      double left_mean, double right_mean) {
  MergeEvent ev;
  ev.left_size = left_size;
  ev.right_size = right_size;
  ev.left_mean = left_mean;
  ev.right_mean = right_mean;
  ev.lambda = (right_mean - left_mean) / static_cast<double>(left_size + right_size);
  ev.left_max = sample.value(split - 1);
  ev.right_min = sample.value(split);
  ev.merged_span = {sample.value(first), sample.value(last - 1)};
  ev.first = first;
  ev.split = split;
  ev.last = last;
  return ev;
}

double mean_of(const Slot& c) { return c.sum.value() / static_cast<double>(c.size); }

}  // namespace

ClusterPath::ClusterPath(std::shared_ptr<const SortedSample> sample, std::vector<MergeEvent> events)
    : sample_(std::move(sample)), events_(std::move(events)) {}

std::vector<EntryRange> ClusterPath::partition_after(std::size_t applied) const {
  const std::size_t m = sample_->size();
  applied = std::min(applied, events_.size());
  std::vector<char> starts(m, 1);
  for (std::size_t e = 0; e < applied; ++e) {
    starts[events_[e].split] = 0;
  }
  std::vector<EntryRange> ranges;
  ranges.reserve(m - applied);
  for (std::size_t i = 0; i < m; ++i) {
    if (starts[i]) {
      if (!ranges.empty()) ranges.back().last = i;
      ranges.push_back({i, m});
    }
  }
  return ranges;
}

ClusterPath build_merge_path(const SortedSample& sample) {
  return build_merge_path(std::make_shared<const SortedSample>(sample));
}

ClusterPath build_merge_path(std::shared_ptr<const SortedSample> sample_ptr) {
  if (!sample_ptr) {
    throw InvalidSampleError("null sample");
  }
  const SortedSample& sample = *sample_ptr;
  const std::size_t m = sample.size();

  if (sample.n() >= kNone) {
    throw InvalidSampleError("sample has too many observations");
  }
  const auto count = static_cast<std::uint32_t>(m);

  std::vector<Slot> slot(m);
  for (std::uint32_t i = 0; i < count; ++i) {
    Slot& c = slot[i];
    c.next = i + 1 < count ? i + 1 : kNone;
    c.prev = i > 0 ? i - 1 : kNone;
    c.end = i + 1;
    c.size = static_cast<std::uint32_t>(sample.count(i));
    c.sum = sample.sum_in(i, i + 1);
  }

  auto distance = [&](const Slot& l, const Slot& r) {
    return (mean_of(r) - mean_of(l)) / static_cast<double>(l.size + r.size);
  };

  PairHeap heap(m);
  for (std::uint32_t i = 0; i + 1 < count; ++i) heap.append(i, distance(slot[i], slot[i + 1]));
  heap.heapify();

  std::vector<MergeEvent> events;
  events.reserve(m > 0 ? m - 1 : 0);

  while (!heap.empty()) {
    const std::uint32_t li = heap.top();
    Slot& l = slot[li];
    const std::uint32_t ri = l.next;
    Slot& r = slot[ri];

    events.push_back(make_event(sample, li, ri, r.end, l.size, r.size, mean_of(l), mean_of(r)));

    l.size += r.size;
    l.sum += r.sum;
    l.end = r.end;
    l.next = r.next;
    if (l.next != kNone) slot[l.next].prev = li;

    if (heap.contains(ri)) heap.erase(ri);
    if (l.next != kNone) {
      heap.update(li, distance(l, slot[l.next]));
    } else {
      heap.erase(li);
    }
    if (l.prev != kNone) heap.update(l.prev, distance(slot[l.prev], l));
  }

  return ClusterPath(std::move(sample_ptr), std::move(events));
}

ClusterPath split_sequence_oracle(const SortedSample& sample) {
  return split_sequence_oracle(std::make_shared<const SortedSample>(sample));
}

ClusterPath split_sequence_oracle(std::shared_ptr<const SortedSample> sample_ptr) {
  if (!sample_ptr) {
    throw InvalidSampleError("null sample");
  }
  const SortedSample& sample = *sample_ptr;
  std::vector<MergeEvent> events;

  std::vector<EntryRange> pending{{0, sample.size()}};
  std::vector<ExactSum> prefix;
  std::vector<ExactSum> suffix;
  while (!pending.empty()) {
    const EntryRange cluster = pending.back();
    pending.pop_back();
    const std::size_t width = cluster.last - cluster.first;
    if (width < 2) continue;

    // Running sums from both ends, entry by entry, so every sub-cluster
    // total is accumulated exactly.
    prefix.assign(width + 1, ExactSum{});
    suffix.assign(width + 1, ExactSum{});
    for (std::size_t i = 0; i < width; ++i) {
      prefix[i + 1] = prefix[i];
      prefix[i + 1] += sample.sum_in(cluster.first + i, cluster.first + i + 1);
      const std::size_t j = width - 1 - i;
      suffix[j] = suffix[j + 1];
      suffix[j] += sample.sum_in(cluster.first + j, cluster.first + j + 1);
    }

    double best_gap = -std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    double best_left_mean = 0.0;
    double best_right_mean = 0.0;
    for (std::size_t k = 1; k < width; ++k) {
      const std::size_t split = cluster.first + k;
      const double left_mean = prefix[k].value() /
                               static_cast<double>(sample.count_in(cluster.first, split));
      const double right_mean = suffix[k].value() /
                                static_cast<double>(sample.count_in(split, cluster.last));
      const double gap = right_mean - left_mean;
      if (gap > best_gap) {
        best_gap = gap;
        best_k = k;
        best_left_mean = left_mean;
        best_right_mean = right_mean;
      }
    }

    const std::size_t split = cluster.first + best_k;
    events.push_back(make_event(sample, cluster.first, split, cluster.last,
                                sample.count_in(cluster.first, split),
                                sample.count_in(split, cluster.last), best_left_mean,
                                best_right_mean));
    pending.push_back({cluster.first, split});
    pending.push_back({split, cluster.last});
  }

  std::stable_sort(events.begin(), events.end(), [](const MergeEvent& a, const MergeEvent& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.first < b.first;
  });
  return ClusterPath(std::move(sample_ptr), std::move(events));
}

std::vector<double> cluster_centroids(const ClusterPath& path, std::size_t applied,
                                      double lambda) {
  const SortedSample& sample = path.sample();
  const auto ranges = path.partition_after(applied);
  const auto n = static_cast<double>(sample.n());
  std::vector<double> centroids;
  centroids.reserve(ranges.size());
  double below = 0.0;
  for (const EntryRange& r : ranges) {
    const auto size = static_cast<double>(sample.count_in(r.first, r.last));
    const double above = n - below - size;
    centroids.push_back(sample.mean_in(r.first, r.last) + lambda * (above - below));
    below += size;
  }
  return centroids;
}

std::vector<double> centroids_at(const ClusterPath& path, double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("lambda must be non-negative");
  }
  const auto& events = path.events();
  std::size_t applied = 0;
  while (applied < events.size() && events[applied].lambda <= lambda) {
    ++applied;
  }
  const auto ranges = path.partition_after(applied);
  const auto per_cluster = cluster_centroids(path, applied, lambda);
  std::vector<double> out;
  out.reserve(path.sample().n());
  for (std::size_t c = 0; c < ranges.size(); ++c) {
    out.insert(out.end(), path.sample().count_in(ranges[c].first, ranges[c].last),
               per_cluster[c]);
  }
  return out;
}

std::vector<EntryRange> partition_at_k(const ClusterPath& path, std::size_t k) {
  const std::size_t m = path.sample().size();
  if (k < 1 || k > m) {
    throw DomainError("k must lie in [1, " + std::to_string(m) + "]");
  }
  return path.partition_after(m - k);
}

}  // namespace fusionclust
