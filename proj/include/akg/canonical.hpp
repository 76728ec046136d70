#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace akg {

/// Canonical attribute/feature spelling: words are joined in UpperCamel form,
/// keeping '_' and '-' and the original casing of non-initial letters.
/// "engine separation" -> "EngineSeparation", "Boeing 777-9X" -> "Boeing777-9X".
/// Idempotent.
std::string canonicalize(std::string_view text);

/// Case-insensitive comparison key of a canonical name (lowercase, only [a-z0-9]).
std::string canonical_key(std::string_view text);

/// Lowercase alphanumeric tokens; CamelCase boundaries also split.
/// "TailPipeFires" -> {tail, pipe, fires}.
std::vector<std::string> word_tokens(std::string_view text);

/// Lowercase text with punctuation turned into spaces, split on whitespace.
std::vector<std::string> normalized_words(std::string_view text);

}  // namespace akg
