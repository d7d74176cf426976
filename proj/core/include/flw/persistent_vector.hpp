// Chunked copy-on-write vector.  Copies share chunks; a write clones only
// the chunk it touches when that chunk is shared.
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace flw {

template <class T, std::size_t ChunkSize = 32>
class PersistentVector {
 public:
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  const T& operator[](std::size_t i) const { return (*chunks_[i / ChunkSize])[i % ChunkSize]; }

  /// Mutable access; clones the chunk when another copy still shares it.
  T& mut(std::size_t i) {
    auto& chunk = chunks_[i / ChunkSize];
    if (chunk.use_count() > 1) chunk = std::make_shared<Chunk>(*chunk);
    return (*chunk)[i % ChunkSize];
  }

  /// Appends and returns the new element's index.
  std::size_t push_back(T value) {
    if (size_ % ChunkSize == 0) chunks_.push_back(std::make_shared<Chunk>());
    std::size_t i = size_++;
    mut(i) = std::move(value);
    return i;
  }

  /// Number of chunks shared with `other` (for tests and diagnostics).
  std::size_t shared_chunks(const PersistentVector& other) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < chunks_.size() && i < other.chunks_.size(); ++i)
      if (chunks_[i] == other.chunks_[i]) ++n;
    return n;
  }

 private:
  using Chunk = std::array<T, ChunkSize>;
  std::vector<std::shared_ptr<Chunk>> chunks_;
  std::size_t size_ = 0;
};

}  // namespace flw
