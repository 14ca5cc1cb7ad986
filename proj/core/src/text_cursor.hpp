#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>

#include "dickson/nat.hpp"
#include "dickson/sequence.hpp"

namespace dickson::detail {

/// Whitespace-skipping cursor shared by the sequence and function parsers.
class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }

  std::size_t position() {
    skip_space();
    return pos_;
  }

  bool peek_literal(std::string_view lit) {
    skip_space();
    return text_.substr(pos_, lit.size()) == lit;
  }

  bool accept(std::string_view lit) {
    if (!peek_literal(lit)) return false;
    pos_ += lit.size();
    return true;
  }

  void expect(std::string_view lit) {
    if (!accept(lit)) fail({std::string(lit)});
  }

  bool peek_digit() {
    skip_space();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Nat natural() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail({"<natural>"});
    return Nat(std::string(text_.substr(start, pos_ - start)));
  }

  /// Identifier made of lowercase letters, digits or underscores.
  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::islower(static_cast<unsigned char>(text_[pos_])) ||
            std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void rewind(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void fail(std::set<std::string> expected) {
    skip_space();
    std::string found = pos_ < text_.size() ? std::string(text_.substr(pos_, 12)) : "<end of input>";
    throw ParseError(pos_, std::move(expected), found);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace dickson::detail
