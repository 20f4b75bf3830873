#ifndef DGX_TESTS_DOT_READER_H_
#define DGX_TESTS_DOT_READER_H_

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dgx::test {

// Recursive-descent reader for the DOT subset: one digraph of node, edge and
// attribute statements with bracketed attribute lists.
class DotReader {
 public:
  explicit DotReader(std::string text) : s_(std::move(text)) {}

  struct Parsed {
    std::set<std::string> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::map<std::string, std::string>> edge_attrs;
  };

  bool Parse(Parsed& out) {
    if (Id() != "digraph") return false;
    Skip();
    if (Peek() != '{') Id();  // optional graph name
    if (!Eat('{')) return false;
    while (true) {
      Skip();
      if (Eat('}')) break;
      if (pos_ >= s_.size()) return false;
      const std::string a = Id();
      if (a.empty()) return false;
      std::map<std::string, std::string> attrs;
      Skip();
      if (Eat('-')) {
        if (!Eat('>')) return false;
        const std::string b = Id();
        if (b.empty()) return false;
        if (!Attrs(attrs)) return false;
        out.edges.push_back({a, b});
        out.edge_attrs.push_back(attrs);
        out.nodes.insert(a);
        out.nodes.insert(b);
      } else {
        if (!Attrs(attrs)) return false;
        if (a != "node" && a != "edge" && a != "graph") out.nodes.insert(a);
      }
      Skip();
      Eat(';');
    }
    Skip();
    return pos_ == s_.size();
  }

 private:
  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char Peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool Eat(char c) {
    Skip();
    if (Peek() != c) return false;
    ++pos_;
    return true;
  }
  std::string Id() {
    Skip();
    std::string out;
    if (Peek() == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\') ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) return "";
      ++pos_;
      return out;
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '_' || s_[pos_] == '.')) {
      out += s_[pos_++];
    }
    return out;
  }
  bool Attrs(std::map<std::string, std::string>& attrs) {
    Skip();
    if (!Eat('[')) return true;
    while (true) {
      Skip();
      if (Eat(']')) return true;
      const std::string key = Id();
      if (key.empty() || !Eat('=')) return false;
      const std::string value = Id();
      if (value.empty()) return false;
      attrs[key] = value;
      Skip();
      if (!Eat(',')) Eat(';');
    }
  }

  std::string s_;
  size_t pos_ = 0;
};

}  // namespace dgx::test

#endif  // DGX_TESTS_DOT_READER_H_
