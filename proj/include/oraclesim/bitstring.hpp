// Fixed-width binary words: problem settings, arguments, solutions and
// measurement outcomes. Rendering is most-significant-bit first, so the
// two-bit word "01" has bit(0) == 0 and bit(1) == 1.
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oraclesim {

class BitString {
  public:
    BitString() = default;
    BitString(std::uint64_t value, int width);

    static BitString parse(std::string_view text);
    static BitString zeros(int width);

    int width() const { return width_; }
    std::uint64_t value() const { return value_; }
    bool empty() const { return width_ == 0; }

    // Position 0 is the leftmost (most significant) bit.
    int bit(int pos) const;
    BitString with_bit(int pos, int bit_value) const;

    // Contiguous sub-word starting at `pos`, `len` bits long.
    BitString slice(int pos, int len) const;
    BitString concat(const BitString& rhs) const;

    BitString operator^(const BitString& rhs) const;
    BitString complemented() const;

    // Mod-2 inner product (orthogonality tests).
    int dot2(const BitString& rhs) const;

    bool all_zero() const { return value_ == 0; }
    int popcount() const;

    std::string str() const;

    friend auto operator<=>(const BitString&, const BitString&) = default;

  private:
    std::uint64_t value_ = 0;
    int width_ = 0;
};

// Cell layout of a register: `cell_count` atomic measurable units of
// `cell_width` bits each, concatenated most-significant cell first.
struct CellSpec {
    int cell_count = 0;
    int cell_width = 1;

    int total_width() const { return cell_count * cell_width; }
};

// Value of one cell of `word` under `spec`.
BitString cell_value(const BitString& word, const CellSpec& spec, int cell);

// Concatenated values of the given cells (ascending cell order).
BitString extract_cells(const BitString& word, const CellSpec& spec,
                        const std::vector<int>& cells);

bool agrees_on_cells(const BitString& a, const BitString& b,
                     const CellSpec& spec, const std::vector<int>& cells);

}  // namespace oraclesim
