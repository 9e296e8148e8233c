#ifndef MCCSR_DICTIONARY_IO_HPP
#define MCCSR_DICTIONARY_IO_HPP

#include <iosfwd>
#include <string>

#include "mccsr/dictionary_learning.hpp"

namespace mccsr {

/// Binary dictionary format, little-endian:
///   magic "MCSR", version u32, then for each of {LR, HR} x {r, g, b}:
///   rows u32, cols u32, row-major float64 payload; then patch_side, scale
///   and feature count as a u32 triple.
void write_dictionary(std::ostream& out, const DictionaryPair& dict);
void write_dictionary(const std::string& path, const DictionaryPair& dict);

DictionaryPair read_dictionary(std::istream& in);
DictionaryPair read_dictionary(const std::string& path);

}  // namespace mccsr

#endif
