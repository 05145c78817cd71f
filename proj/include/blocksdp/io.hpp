#pragma once

#include <map>
#include <string>

#include "blocksdp/types.hpp"

namespace blocksdp {

// All readers and writers throw std::runtime_error on I/O failure or parse
// errors; the CLI maps those to exit code 2.

// Edge list: lines "i j" with 0-based endpoints, '#' starts a comment.
// A "# n <N>" line fixes the node count so isolated tail nodes survive a
// round trip; the writer always emits it and lists each edge once as i < j.
Matrix read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const Matrix& a);

// Comma-separated values, shortest round-trip float formatting, one matrix
// row per line. '#' comment lines are skipped on read.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& m);

// One 1-based class label per line; K is the maximum seen.
Labels read_labels(const std::string& path);
void write_labels(const std::string& path, const Labels& labels);

// Plain-text PGM, maxval 255, pixel = round(255 * (1 - v)) after clamping v
// to [0,1]: value 1 renders black.
void write_pgm(const std::string& path, const Matrix& values);

// Sectioned key=value text. Keys before any [section] land in section "".
// Full-line comments start with '#' or ';'. Keys and values are trimmed;
// values keep internal spaces (lists are space-separated).
using IniSection = std::map<std::string, std::string>;
using IniFile = std::map<std::string, IniSection>;
IniFile read_ini(const std::string& path);

// Shortest round-trip decimal form of x ("0.1", not "0.100000").
std::string format_double(double x);

}  // namespace blocksdp
