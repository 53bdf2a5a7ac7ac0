#include "gnskit/kvdoc.hpp"

#include <algorithm>
#include <sstream>

#include "gnskit/error.hpp"

namespace gnskit {

KvNode& KvNode::add(std::string k, std::string v) {
    children.push_back({std::move(k), std::move(v), {}});
    return children.back();
}

const KvNode* KvNode::find(std::string_view k) const {
    for (const auto& child : children)
        if (child.key == k) return &child;
    return nullptr;
}

const KvNode& KvNode::at(std::string_view k) const {
    if (const auto* child = find(k)) return *child;
    throw InputError("missing field '" + std::string(k) + "' in section '" + key + "'");
}

std::vector<const KvNode*> KvNode::all(std::string_view k) const {
    std::vector<const KvNode*> found;
    for (const auto& child : children)
        if (child.key == k) found.push_back(&child);
    return found;
}

namespace {

void render(const KvNode& node, int depth, std::ostringstream& out) {
    out << std::string(static_cast<std::size_t>(2 * depth), ' ') << node.key << ':';
    if (!node.value.empty()) out << ' ' << node.value;
    out << '\n';
    for (const auto& child : node.children) render(child, depth + 1, out);
}

}  // namespace

std::string render_kv(const KvNode& root) {
    std::ostringstream out;
    render(root, 0, out);
    return out.str();
}

namespace {

void render_aligned(const KvNode& node, int depth, std::ostringstream& out) {
    std::size_t width = 0;
    for (const auto& child : node.children)
        if (child.children.empty()) width = std::max(width, child.key.size());
    for (const auto& child : node.children) {
        out << std::string(static_cast<std::size_t>(2 * depth), ' ') << child.key << ':';
        if (!child.value.empty()) out << std::string(width - std::min(width, child.key.size()) + 1, ' ') << child.value;
        out << '\n';
        render_aligned(child, depth + 1, out);
    }
}

}  // namespace

std::string render_kv_aligned(const KvNode& root, std::string_view title) {
    std::ostringstream out;
    out << title << '\n';
    render_aligned(root, 1, out);
    return out.str();
}

KvNode parse_kv(std::string_view text) {
    std::vector<std::pair<int, KvNode>> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++number;
        while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(' ') == std::string_view::npos || line[line.find_first_not_of(' ')] == '#') continue;
        const auto indent = line.find_first_not_of(' ');
        if (indent % 2 != 0) throw InputError("line " + std::to_string(number) + ": odd indentation");
        line.remove_prefix(indent);
        const auto colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0)
            throw InputError("line " + std::to_string(number) + ": expected 'key: value'");
        std::string_view value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.remove_prefix(1);
        lines.push_back({static_cast<int>(indent / 2), KvNode{std::string(line.substr(0, colon)), std::string(value), {}}});
    }
    if (lines.empty()) throw InputError("empty report");
    if (lines.front().first != 0) throw InputError("report must start at column 0");

    // attach each node to the nearest shallower predecessor
    KvNode root = std::move(lines.front().second);
    std::vector<KvNode*> stack{&root};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const int depth = lines[i].first;
        if (depth == 0) throw InputError("report has more than one top-level node");
        if (depth > static_cast<int>(stack.size())) throw InputError("indentation jumps more than one level");
        stack.resize(static_cast<std::size_t>(depth));
        stack.back()->children.push_back(std::move(lines[i].second));
        stack.push_back(&stack.back()->children.back());
    }
    return root;
}

}  // namespace gnskit
