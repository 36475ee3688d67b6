// Pre-images of CEFA languages under the string-level operations produced by
// the sequence encoding, and the counting automata for lengths.
#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqstr/cefa.hpp"
#include "seqstr/encode.hpp"
#include "seqstr/lia.hpp"
#include "seqstr/nft.hpp"

namespace seqstr {

/// Fresh register names, unique for the lifetime of the generator.
class NameGen {
 public:
  std::string fresh(const std::string& base);

 private:
  long next_ = 0;
};

/// Placeholder for the k-th index argument of an operation inside a binding.
std::string index_placeholder(size_t k);

/// One product of argument automata. A tuple of argument strings accepted by
/// `args` with register values c satisfying `binding` (index placeholders
/// replaced by the actual indices) maps to an output accepted by the original
/// automaton with register values terms(c).
struct PreimageAlternative {
  std::vector<Cefa> args;       // one per string argument
  std::vector<LinExpr> terms;   // one per register of the original automaton
  LiaFormula binding;
};

/// Lazily built alternatives. Builders that find their product empty are
/// skipped.
class Alternatives {
 public:
  using Builder = std::function<std::optional<PreimageAlternative>()>;

  void add(Builder b) { pending_.push_back(std::move(b)); }
  void add(PreimageAlternative alt);
  std::optional<PreimageAlternative> next();
  size_t pending() const { return pending_.size(); }
  std::vector<PreimageAlternative> collect();

 private:
  std::deque<Builder> pending_;
};

/// x · y: one alternative per pivot state.
Alternatives pre_concat(const Cefa& a, NameGen& names);

/// t(x) for a transducer without spontaneous transitions. Outputs for the
/// empty input become separate alternatives whose argument accepts only ε.
Alternatives pre_nft(const EpsFreeNft& t, const Cefa& a, NameGen& names);

/// Pivot pairs (p, q) of pre_write: a † leads into p, a † leaves q and q is
/// reachable from p by symbols of Σ.
std::vector<std::pair<int, int>> write_pivot_pairs(const Cefa& a);

/// write(x, k, y): one alternative per admissible pivot pair plus one for
/// indices outside the sequence, where x is left unchanged.
Alternatives pre_write(const Cefa& a, NameGen& names);

/// subseq(x, k, j): the exact-length branch, the branch where the range is
/// cut at the end of x, and the branch for j = 0.
Alternatives pre_subseq(const Cefa& a, NameGen& names);

/// elem(x, k).
Alternatives pre_elem(const Cefa& a, NameGen& names);

/// Pre-image under the right-hand side of a definition.
Alternatives preimage(const XDef& d, const Cefa& a, NameGen& names);

/// One state; `reg` grows by one on every symbol.
Cefa strlen_cefa(const std::string& reg);
/// One state; `reg` grows by one on every †.
Cefa seqlen_cefa(const std::string& reg);

}  // namespace seqstr
