#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gnskit/error.hpp"

namespace gnskit::detail {

struct Line {
    std::size_t number = 0;
    std::string_view raw;  // comment stripped
    std::vector<std::string> tokens;

    /// Text after the first `count` tokens, trimmed.
    std::string rest_after(std::size_t count) const {
        std::string_view s = raw;
        for (std::size_t i = 0; i < count; ++i) {
            s.remove_prefix(std::min(s.find_first_not_of(" \t"), s.size()));
            s.remove_prefix(std::min(s.find_first_of(" \t"), s.size()));
        }
        s.remove_prefix(std::min(s.find_first_not_of(" \t"), s.size()));
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return std::string(s);
    }
};

/// Splits text into non-empty, comment-free, whitespace-tokenized lines.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::optional<Line> next() {
        while (pos_ <= text_.size() && pos_ != std::string_view::npos) {
            const auto end = text_.find('\n', pos_);
            std::string_view raw = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
            pos_ = end == std::string_view::npos ? std::string_view::npos : end + 1;
            ++number_;
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            Line line{number_, raw, split(raw)};
            if (!line.tokens.empty()) return line;
        }
        return std::nullopt;
    }

    std::size_t line_number() const { return number_; }

    InputError error(const std::string& message) const {
        return InputError("line " + std::to_string(number_) + ": " + message);
    }

    static std::vector<std::string> split(std::string_view raw) {
        std::vector<std::string> tokens;
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            std::size_t j = i;
            while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
            if (j > i) tokens.emplace_back(raw.substr(i, j - i));
            i = j;
        }
        return tokens;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t number_ = 0;
};

template <class Int = int>
Int parse_int(std::string_view token, const LineReader& reader) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw reader.error("expected an integer, got '" + std::string(token) + "'");
    return value;
}

inline void write_comment(std::ostream& out, std::string_view comment) {
    while (!comment.empty()) {
        const auto nl = comment.find('\n');
        out << "# " << comment.substr(0, nl) << '\n';
        if (nl == std::string_view::npos) break;
        comment.remove_prefix(nl + 1);
    }
}

}  // namespace gnskit::detail
