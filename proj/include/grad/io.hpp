#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "grad/algebra.hpp"
#include "grad/graph.hpp"

namespace grad {

/// grad/1 documents. One record per line, tab-separated fields:
///
///   grad/1  <lax|strict>  <record count>
///   N   <nid>  <class>  <name>=<value>...        entity node
///   A   <nid>  <label>                           attribute node
///   L   <nid>  <value>                           literal node
///   E   <start> <end> <kind> <label> <name>=<value>...
///   AE  <entity nid> <attribute nid>
///   LE  <attribute nid> <literal nid> <name>=<value>...
///
/// Records appear in that order, each group in canonical order, and node
/// ids n1, n2, ... follow it, so saving a loaded document reproduces it
/// byte for byte. Values are tagged: i:3884  f:8.5  s:Star_Trek  b:true
/// c:[i:1,s:x]. The grammar is spelled out in docs/grad1.md.
std::string save(const GradGraph& g);
/// Throws SinkError when the stream fails. Returns the bytes written.
std::size_t save(const GradGraph& g, std::ostream& sink);

/// Throws ParseError (with line) and UnsupportedVersion.
GradGraph load(std::string_view text);
GradGraph load(std::istream& source);

/// A collection is a concatenation of documents; the header record count
/// delimits each one.
std::string save(const GraphCollection& c);
GraphCollection load_collection(std::string_view text);

std::string encode_value(const Value& v);
/// Throws ParseError (line 0) on malformed input.
Value decode_value(std::string_view text);

/// Read-only renderings for other tools.
std::string to_json(const GradGraph& g);
std::string to_dot(const GradGraph& g);

}  // namespace grad
