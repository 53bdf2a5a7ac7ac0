#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gnskit {

/// Line-oriented `key: value` tree. A node with children is written as
/// `key:` and its children follow, indented two more spaces.
struct KvNode {
    std::string key;
    std::string value;
    std::vector<KvNode> children;

    KvNode& add(std::string key, std::string value = {});
    const KvNode* find(std::string_view key) const;
    /// Child `key`; InputError if absent.
    const KvNode& at(std::string_view key) const;
    std::vector<const KvNode*> all(std::string_view key) const;

    bool operator==(const KvNode&) const = default;
};

std::string render_kv(const KvNode& root);

/// Human form: a title line, then the children with values aligned per
/// section.
std::string render_kv_aligned(const KvNode& root, std::string_view title);

/// Inverse of render_kv for a single top-level node.
KvNode parse_kv(std::string_view text);

}  // namespace gnskit
