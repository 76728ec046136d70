#include "akg/canonical.hpp"

#include <cctype>

namespace akg {

namespace {

bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::string canonicalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool word_start = true;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (!is_name_char(c)) {
            word_start = true;
            continue;
        }
        out.push_back(word_start ? static_cast<char>(std::toupper(c)) : ch);
        word_start = false;
    }
    return out;
}

std::string canonical_key(std::string_view text) {
    std::string out;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) out.push_back(lower(ch));
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    char prev = '\0';
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (!std::isalnum(c)) {
            flush();
            prev = '\0';
            continue;
        }
        auto p = static_cast<unsigned char>(prev);
        if (std::isupper(c) && (std::islower(p) || std::isdigit(p))) flush();
        current.push_back(lower(ch));
        prev = ch;
    }
    flush();
    return tokens;
}

std::vector<std::string> normalized_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            current.push_back(lower(ch));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

}  // namespace akg
