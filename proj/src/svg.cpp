#include "notchkit/svg.hpp"

#include <algorithm>
#include <sstream>

namespace notchkit {

namespace {

constexpr int kRow = 28;
constexpr int kIndent = 20;
constexpr int kCharWidth = 8;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color(const BlockDefinition& def) {
  if (def.id == kErrorStatementBlock || def.id == kErrorExpressionBlock) return "#d9534f";
  if (def.category == "Control") return "#e6a23c";
  if (def.category == "Values") return "#ff8c1a";
  if (def.category == "Operators") return "#59c059";
  return "#9966ff";
}

class Renderer {
 public:
  explicit Renderer(const Palette& p) : palette_(p) {}

  /// Draws a stack with its top-left corner at (x, y); returns its height.
  int stack(const std::vector<BlockInstance>& blocks, int x, int y) {
    int h = 0;
    for (const auto& b : blocks) h += block(b, x, y + h);
    return h;
  }

  std::string take(int width, int height) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"13\">\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  int max_x() const { return max_x_; }

 private:
  /// Inline text of a value block, with its own sockets in brackets.
  std::string inline_text(const BlockInstance& b) {
    const auto& def = palette_.at(b.definition);
    return "(" + header(b, def) + ")";
  }

  std::string socket_text(const BlockInstance& b, const BlockDefinition& def, std::size_t i) {
    const auto& f = b.sockets.at(i);
    if (!f.blocks.empty()) return inline_text(f.blocks.front());
    const auto v = f.literal ? f.literal : def.sockets[i].default_value;
    if (!v) return "[ ]";
    const std::string shown = display(*v);
    return std::holds_alternative<std::string>(*v) && !def.sockets[i].identifier ? "[\"" + shown + "\"]"
                                                                                  : "[" + shown + "]";
  }

  std::string header(const BlockInstance& b, const BlockDefinition& def) {
    std::string text;
    for (const auto& seg : def.label) {
      std::string part;
      if (!seg.socket) {
        part = seg.words;
      } else if (!def.sockets[*seg.socket].is_slot()) {
        part = socket_text(b, def, *seg.socket);
      }
      if (part.empty()) continue;
      if (!text.empty()) text += ' ';
      text += part;
    }
    return text;
  }

  int stack_height(const std::vector<BlockInstance>& blocks) {
    int h = 0;
    for (const auto& b : blocks) h += height(b);
    return h;
  }

  int height(const BlockInstance& b) {
    const auto& def = palette_.at(b.definition);
    int h = kRow;
    for (std::size_t i = 0; i < def.sockets.size(); ++i) {
      if (def.sockets[i].is_slot()) h += std::max(kRow / 2, stack_height(b.sockets[i].blocks)) + 6;
    }
    return h;
  }

  int block(const BlockInstance& b, int x, int y) {
    const auto& def = palette_.at(b.definition);
    const std::string label = header(b, def);
    const int width = std::max(120, static_cast<int>(label.size()) * kCharWidth + 16);
    const int h = height(b);
    body_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << width << "\" height=\"" << h
          << "\" rx=\"4\" fill=\"" << color(def) << "\" fill-opacity=\"0.85\" stroke=\"#333\"/>\n"
          << "<text x=\"" << x + 8 << "\" y=\"" << y + 18 << "\">" << escape(label) << "</text>\n";
    max_x_ = std::max(max_x_, x + width);
    int row = y + kRow;
    for (std::size_t i = 0; i < def.sockets.size(); ++i) {
      if (!def.sockets[i].is_slot()) continue;
      row += std::max(kRow / 2, stack(b.sockets[i].blocks, x + kIndent, row)) + 6;
    }
    return h;
  }

  const Palette& palette_;
  std::ostringstream body_;
  int max_x_ = 0;
};

}  // namespace

std::string render_svg(const Palette& palette, const Workspace& w) {
  Renderer r(palette);
  int bottom = 0;
  for (const auto& island : w.islands) {
    const int h = r.stack(island.stack, island.position.x + 10, island.position.y + 10);
    bottom = std::max(bottom, island.position.y + 10 + h);
  }
  return r.take(std::max(200, r.max_x() + 10), std::max(60, bottom + 10));
}

}  // namespace notchkit
