// Nondeterministic finite transducers with spontaneous transitions.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "seqstr/alphabet.hpp"

namespace seqstr {

/// One output symbol: either a constant or a copy of the symbol just read.
struct OutSym {
  bool copy = false;
  Symbol c = 0;

  static OutSym constant(Symbol s) { return {false, s}; }
  static OutSym echo() { return {true, 0}; }
  friend bool operator==(const OutSym&, const OutSym&) = default;
  friend auto operator<=>(const OutSym&, const OutSym&) = default;
};
using Output = std::vector<OutSym>;

Output output_of(std::u32string_view w);

struct NftEdge {
  bool epsilon = false;  // spontaneous: reads nothing, `label` unused
  CharRange label;
  int dst = 0;
  Output out;
};

class Nft {
 public:
  int add_state(bool initial = false, bool final = false);
  void add_edge(int src, CharRange label, int dst, Output out = {});
  /// Spontaneous transitions may not echo.
  void add_epsilon(int src, int dst, Output out = {});
  void set_initial(int q, bool value = true);
  void set_final(int q, bool value = true);

  int num_states() const { return static_cast<int>(out_.size()); }
  const std::vector<NftEdge>& edges(int q) const { return out_.at(q); }
  bool is_initial(int q) const { return initial_.at(q) != 0; }
  bool is_final(int q) const { return final_.at(q) != 0; }
  std::vector<int> initial_states() const;
  bool has_epsilon() const;

  /// `src lo-hi dst / output` per line; spontaneous edges print `eps`.
  std::string to_text() const;

 private:
  std::vector<std::vector<NftEdge>> out_;
  std::vector<char> initial_;
  std::vector<char> final_;
};

class OutputOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All outputs of accepting runs on `w`, sorted. Throws OutputOverflow when
/// there are more than `max` distinct outputs.
std::vector<Word> nft_outputs(const Nft& t, std::u32string_view w, size_t max);

/// A transducer without spontaneous transitions. Its only final state is a
/// sink reached by the last symbol of the input; outputs produced for the
/// empty input are listed separately.
struct EpsFreeNft {
  Nft nft;
  std::vector<Word> empty_input_outputs;
};

EpsFreeNft nft_eliminate_epsilon(const Nft& t);

}  // namespace seqstr
