// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace blobfield {

/// 0 means "one worker per hardware thread".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// Runs fn(row) for every row in [0, rows). Rows are split into contiguous
/// blocks, one per worker; fn must only write state owned by its row.
template <typename Fn>
void parallel_for_rows(int rows, int threads, Fn&& fn) {
  const int workers = std::min(resolve_threads(threads), std::max(rows, 1));
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int begin = rows * w / workers;
    const int end = rows * (w + 1) / workers;
    pool.emplace_back([begin, end, &fn] {
      for (int r = begin; r < end; ++r) fn(r);
    });
  }
}

}  // namespace blobfield
