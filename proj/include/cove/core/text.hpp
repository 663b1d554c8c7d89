#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cove::text {

/// Unicode NFC normalization. Invalid UTF-8 sequences become U+FFFD.
std::string nfc(std::string_view s);

/// Full Unicode case folding.
std::string casefold(std::string_view s);

/// Trim and collapse every run of Unicode whitespace to one ASCII space.
std::string collapse_whitespace(std::string_view s);

/// ASCII trim only.
std::string_view trim(std::string_view s);

std::string to_lower_ascii(std::string_view s);

/// Key used by the veracity rules: NFC + whitespace collapse, case kept.
std::string match_key(std::string_view s);

/// NFC + trim + collapse + case fold.
std::string loose_key(std::string_view s);

/// Case-folded maximal runs of letters and digits.
std::vector<std::string> word_tokens(std::string_view s);

/// Whitespace-separated tokens (no normalization).
std::vector<std::string> split_whitespace(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace cove::text
