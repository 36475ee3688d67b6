// Transducers realizing the string counterparts of the sequence operations
// on †-delimited encodings.
#pragma once

#include "seqstr/nft.hpp"
#include "seqstr/regex.hpp"

namespace seqstr {

/// Keeps the elements of an encoded sequence that match `e`:
/// †u1†...†um† becomes the encoding of the matching elements only.
Nft filter_nft(const Regex& e);

/// Encodes the leftmost-longest matches of `e` in a plain string as a
/// sequence: "†v1†...†vk†", or "†" without matches.
Nft match_all_nft(const Regex& e);

/// Replaces every leftmost-longest match of `e` by `rep`.
Nft replace_all_nft(const Regex& e, std::u32string_view rep);

/// "†" · replaceAll(u, †) · "†": the encoding of the split of u.
Nft splitstr_nft(const Regex& e);

/// Joins the elements of an encoded sequence with `sep`.
Nft join_nft(std::u32string_view sep);

/// Drops the leading † of an encoded sequence.
Nft tail_nft();

/// Maps a plain string y to the one-element encoding †y†.
Nft wrap_nft();

}  // namespace seqstr
