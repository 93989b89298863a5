#pragma once

// Reductions into featured games: modal mu-calculus model checking of an FTS
// to a featured parity game, and discounted bisimulation distance between
// weighted FTS to a featured discounted game.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fgame/fts.hpp"
#include "fgame/game.hpp"

namespace fgame {

/// Immutable modal mu-calculus formula.
class MuFormula {
 public:
  enum class Kind : std::uint8_t { True, False, Var, Or, And, Diamond, Box, Mu, Nu };

  static MuFormula tt();
  static MuFormula ff();
  static MuFormula var(std::string name);
  static MuFormula disj(MuFormula a, MuFormula b);
  static MuFormula conj(MuFormula a, MuFormula b);
  static MuFormula diamond(std::string action, MuFormula body);
  static MuFormula box(std::string action, MuFormula body);
  static MuFormula mu(std::string var, MuFormula body);
  static MuFormula nu(std::string var, MuFormula body);

  Kind kind() const noexcept { return node_->kind; }
  /// Variable name, modality action, or bound variable of a fixpoint.
  const std::string& name() const noexcept { return node_->name; }
  const MuFormula& lhs() const { return *node_->lhs; }
  const MuFormula& rhs() const { return *node_->rhs; }
  /// Body of a modality or fixpoint.
  const MuFormula& body() const { return *node_->lhs; }

  bool isFixpoint() const noexcept { return kind() == Kind::Mu || kind() == Kind::Nu; }

  friend bool operator==(const MuFormula& a, const MuFormula& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const MuFormula> lhs;
    std::shared_ptr<const MuFormula> rhs;
  };
  explicit MuFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Grammar: phi := "tt" | "ff" | ident | phi "||" phi | phi "&&" phi
///   | "<" ident ">" phi | "[" ident "]" phi | ("mu"|"nu") ident "." phi
/// with modalities binding tightest, then &&, then ||, and fixpoints
/// extending as far right as possible.  Rebound variable names are renamed
/// apart.  Throws ParseError, or ValidationError for an unbound variable.
MuFormula parseMuFormula(std::string_view text);

std::string toString(const MuFormula& f);

/// psi[x := replacement] for free occurrences of x; replacement must be closed.
MuFormula substitute(const MuFormula& psi, std::string_view x, const MuFormula& replacement);

bool occursFree(const MuFormula& f, std::string_view x);

/// Alternation depth of the variable bound by the binder of `var` in `phi`:
/// 1 plus the number of alternations along chains of nested fixpoints that
/// mention `var`.  Throws ValidationError if `var` is not bound in phi.
unsigned alternationDepth(const MuFormula& phi, std::string_view var);

/// Featured parity game (min-parity) whose player 1 wins on product p iff
/// the projection of f to p satisfies phi.  State ids are "(s, psi)".
FeaturedGame mucalcToParityGame(const Fts& f, const MuFormula& phi);

/// Featured discounted game to be solved with discount sqrt(lambda); its
/// value at the initial state on product p is the lambda-discounted
/// bisimulation distance between the projections of f1 and f2.  A response
/// state without a same-labelled answer on some product loops with weight
/// K/sqrt(lambda), K the largest weight difference across both systems.
FeaturedGame distanceGame(const Fts& f1, const Fts& f2, double lambda);

/// The distance computed directly from its equation system on the two
/// projections, iterating until the change drops below epsilon.  Uses the
/// same convention for unanswerable challenges as distanceGame.
double directDistanceOracle(const Fts& f1, const Fts& f2, std::size_t productIndex, double lambda, double epsilon);

}  // namespace fgame
