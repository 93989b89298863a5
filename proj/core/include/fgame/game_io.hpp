#pragma once

// JSON game documents.

#include <filesystem>
#include <string>
#include <string_view>

#include "fgame/game.hpp"

namespace fgame {

/// Parses a game document.  Throws ParseError for malformed JSON and
/// ValidationError (naming the offending field) for schema violations.
FeaturedGame parseGame(std::string_view text);

/// Serializes g; parseGame(emitGame(g)) reproduces g field by field.
std::string emitGame(const FeaturedGame& g);

FeaturedGame loadGame(const std::filesystem::path& file);

std::string readTextFile(const std::filesystem::path& file);
void writeTextFile(const std::filesystem::path& file, std::string_view text);

/// Structural equality of two games (states, transitions by position,
/// guards up to syntax, weights, products, metadata).
bool sameStructure(const FeaturedGame& a, const FeaturedGame& b);

}  // namespace fgame
