#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "garble/error.hpp"

namespace garble {

enum class EditOp : std::uint8_t { kMatch, kSubstitute, kDelete, kInsert };

// Guard for the quadratic traceback matrix; ~256 MB at one byte per cell.
inline constexpr std::size_t kDefaultMaxEditCells = std::size_t{1} << 28;

// Minimum-cost edit script turning `ref` into `hyp` under unit costs for
// substitution/deletion/insertion and zero for matches. When several scripts
// are optimal, ties resolve match/substitute first, then delete, then insert
// at every traceback step, so the result is deterministic for fixed inputs.
// Delete means a ref element is absent from hyp; insert means a hyp element
// has no ref counterpart.
template <typename T>
std::vector<EditOp> min_edit_script(std::span<const T> ref, std::span<const T> hyp,
                                    std::size_t max_cells = kDefaultMaxEditCells) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  if ((n + 1) * (m + 1) > max_cells) {
    throw Error("edit distance input too large (" + std::to_string(n) + " x " +
                std::to_string(m) +
                " elements); split the record into smaller units");
  }

  const std::size_t stride = m + 1;
  std::vector<EditOp> from((n + 1) * stride);
  std::vector<std::uint32_t> prev(m + 1), cur(m + 1);

  for (std::size_t j = 0; j <= m; ++j) {
    prev[j] = static_cast<std::uint32_t>(j);
    from[j] = EditOp::kInsert;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    from[i * stride] = EditOp::kDelete;
    for (std::size_t j = 1; j <= m; ++j) {
      const bool match = ref[i - 1] == hyp[j - 1];
      const std::uint32_t diag = prev[j - 1] + (match ? 0 : 1);
      const std::uint32_t del = prev[j] + 1;
      const std::uint32_t ins = cur[j - 1] + 1;
      if (diag <= del && diag <= ins) {
        cur[j] = diag;
        from[i * stride + j] = match ? EditOp::kMatch : EditOp::kSubstitute;
      } else if (del <= ins) {
        cur[j] = del;
        from[i * stride + j] = EditOp::kDelete;
      } else {
        cur[j] = ins;
        from[i * stride + j] = EditOp::kInsert;
      }
    }
    prev.swap(cur);
  }

  std::vector<EditOp> script;
  script.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const EditOp op = from[i * stride + j];
    script.push_back(op);
    switch (op) {
      case EditOp::kMatch:
      case EditOp::kSubstitute:
        --i;
        --j;
        break;
      case EditOp::kDelete:
        --i;
        break;
      case EditOp::kInsert:
        --j;
        break;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

}  // namespace garble
