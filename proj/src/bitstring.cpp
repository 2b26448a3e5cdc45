#include "oraclesim/bitstring.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace oraclesim {

namespace {
std::uint64_t width_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}
}  // namespace

BitString::BitString(std::uint64_t value, int width) : value_(value), width_(width) {
    if (width < 0 || width > 64) {
        throw std::invalid_argument(fmt::format("bit width {} out of range [0,64]", width));
    }
    if ((value & ~width_mask(width)) != 0) {
        throw std::invalid_argument(
            fmt::format("value {:#x} does not fit in {} bits", value, width));
    }
}

BitString BitString::parse(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("empty bit string");
    }
    if (text.size() > 64) {
        throw std::invalid_argument("bit string longer than 64 bits");
    }
    std::uint64_t v = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(fmt::format("bad bit character '{}'", c));
        }
        v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return BitString(v, static_cast<int>(text.size()));
}

BitString BitString::zeros(int width) { return BitString(0, width); }

int BitString::bit(int pos) const {
    if (pos < 0 || pos >= width_) {
        throw std::out_of_range(fmt::format("bit {} of a {}-bit string", pos, width_));
    }
    return static_cast<int>((value_ >> (width_ - 1 - pos)) & 1);
}

BitString BitString::with_bit(int pos, int bit_value) const {
    if (pos < 0 || pos >= width_) {
        throw std::out_of_range(fmt::format("bit {} of a {}-bit string", pos, width_));
    }
    std::uint64_t m = std::uint64_t{1} << (width_ - 1 - pos);
    return BitString(bit_value ? (value_ | m) : (value_ & ~m), width_);
}

BitString BitString::slice(int pos, int len) const {
    if (len < 0 || pos < 0 || pos + len > width_) {
        throw std::out_of_range(
            fmt::format("slice [{},{}) of a {}-bit string", pos, pos + len, width_));
    }
    return BitString((value_ >> (width_ - pos - len)) & width_mask(len), len);
}

BitString BitString::concat(const BitString& rhs) const {
    if (width_ + rhs.width_ > 64) {
        throw std::invalid_argument("concatenation exceeds 64 bits");
    }
    return BitString((value_ << rhs.width_) | rhs.value_, width_ + rhs.width_);
}

BitString BitString::operator^(const BitString& rhs) const {
    if (width_ != rhs.width_) {
        throw std::invalid_argument("xor of bit strings with different widths");
    }
    return BitString(value_ ^ rhs.value_, width_);
}

BitString BitString::complemented() const {
    return BitString(~value_ & width_mask(width_), width_);
}

int BitString::dot2(const BitString& rhs) const {
    if (width_ != rhs.width_) {
        throw std::invalid_argument("dot product of bit strings with different widths");
    }
    return std::popcount(value_ & rhs.value_) & 1;
}

int BitString::popcount() const { return std::popcount(value_); }

std::string BitString::str() const {
    std::string s(static_cast<size_t>(width_), '0');
    for (int i = 0; i < width_; ++i) {
        if (bit(i)) s[static_cast<size_t>(i)] = '1';
    }
    return s;
}

BitString cell_value(const BitString& word, const CellSpec& spec, int cell) {
    if (cell < 0 || cell >= spec.cell_count) {
        throw std::out_of_range(fmt::format("cell {} of {}", cell, spec.cell_count));
    }
    return word.slice(cell * spec.cell_width, spec.cell_width);
}

BitString extract_cells(const BitString& word, const CellSpec& spec,
                        const std::vector<int>& cells) {
    BitString out;
    for (int c : cells) {
        out = out.concat(cell_value(word, spec, c));
    }
    return out;
}

bool agrees_on_cells(const BitString& a, const BitString& b, const CellSpec& spec,
                     const std::vector<int>& cells) {
    for (int c : cells) {
        if (cell_value(a, spec, c) != cell_value(b, spec, c)) return false;
    }
    return true;
}

}  // namespace oraclesim
