#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nesslat {

// Minimal key-value document format shared by model and config files:
//   [section]
//   key = 1.0
//   name = "xxz"
//   params.lambda = 1.0
//   bond = [[0,0],[1,0]]
// '#' starts a comment. Errors carry 1-based line/column.

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct DocValue;
using DocArray = std::vector<DocValue>;

struct DocValue {
    std::variant<double, std::string, DocArray> v;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<DocArray>(v); }
    double num() const { return std::get<double>(v); }
    const std::string& str() const { return std::get<std::string>(v); }
    const DocArray& arr() const { return std::get<DocArray>(v); }
};

struct Document {
    // section -> (key -> value), insertion order kept per section
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, DocValue>>>> sections;

    const std::vector<std::pair<std::string, DocValue>>* find_section(const std::string& name) const {
        for (const auto& s : sections)
            if (s.first == name) return &s.second;
        return nullptr;
    }
    const DocValue* find(const std::string& section, const std::string& key) const {
        const auto* s = find_section(section);
        if (!s) return nullptr;
        for (const auto& kv : *s)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }
};

namespace detail {

class DocLexer {
public:
    explicit DocLexer(const std::string& text) : text_(text) {}

    void skip_ws_and_comments(bool skip_newlines) {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || (skip_newlines && c == '\n')) {
                advance();
            } else {
                break;
            }
        }
    }

    bool eof() { return pos_ >= text_.size(); }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    int line() const { return line_; }
    int col() const { return col_; }

    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string identifier() {
        std::string s;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')
                { s += c; advance(); }
            else break;
        }
        if (s.empty()) fail("expected identifier");
        return s;
    }

    double number() {
        size_t start = pos_;
        int sl = line_, sc = col_;
        while (!eof()) {
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
                c == '.' || c == 'e' || c == 'E')
                advance();
            else break;
        }
        try {
            size_t used = 0;
            double v = std::stod(text_.substr(start, pos_ - start), &used);
            if (used != pos_ - start) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ParseError(sl, sc, "malformed number");
        }
    }

    std::string quoted_string() {
        expect('"');
        std::string s;
        while (!eof() && peek() != '"') { s += peek(); advance(); }
        if (eof()) fail("unterminated string");
        advance();
        return s;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

inline DocValue parse_value(DocLexer& lx) {
    lx.skip_ws_and_comments(true);
    char c = lx.peek();
    if (c == '"') return {lx.quoted_string()};
    if (c == '[') {
        lx.advance();
        DocArray arr;
        lx.skip_ws_and_comments(true);
        if (lx.peek() == ']') { lx.advance(); return {arr}; }
        while (true) {
            arr.push_back(parse_value(lx));
            lx.skip_ws_and_comments(true);
            if (lx.peek() == ',') { lx.advance(); continue; }
            if (lx.peek() == ']') { lx.advance(); break; }
            lx.fail("expected ',' or ']' in array");
        }
        return {arr};
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)))
        return {lx.number()};
    lx.fail("expected value");
}

} // namespace detail

inline Document parse_document(const std::string& text) {
    detail::DocLexer lx(text);
    Document doc;
    while (true) {
        lx.skip_ws_and_comments(true);
        if (lx.eof()) break;
        if (lx.peek() == '[') {
            lx.advance();
            lx.skip_ws_and_comments(false);
            std::string name = lx.identifier();
            lx.skip_ws_and_comments(false);
            lx.expect(']');
            doc.sections.push_back({name, {}});
        } else {
            if (doc.sections.empty()) lx.fail("key outside of any [section]");
            std::string key = lx.identifier();
            lx.skip_ws_and_comments(false);
            lx.expect('=');
            lx.skip_ws_and_comments(false);
            DocValue v = detail::parse_value(lx);
            lx.skip_ws_and_comments(false);
            if (!lx.eof() && lx.peek() != '\n') lx.fail("trailing characters after value");
            doc.sections.back().second.push_back({key, v});
        }
    }
    return doc;
}

} // namespace nesslat
