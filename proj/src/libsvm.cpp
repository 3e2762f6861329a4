#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "pdcert/data_matrix.hpp"

namespace pdcert {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t begin = 0;
  while (begin < rest.size() && is_space(rest[begin])) ++begin;
  std::size_t end = begin;
  while (end < rest.size() && !is_space(rest[end])) ++end;
  std::string_view token = rest.substr(begin, end - begin);
  rest.remove_prefix(end);
  return token;
}

double parse_double(std::string_view token, std::size_t line, const char* what) {
  // from_chars rejects a leading '+', which LIBSVM labels commonly carry.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

LabeledDataset parse_libsvm(const std::string& text) {
  std::vector<std::vector<Entry>> columns;
  std::vector<double> labels;
  std::size_t max_index = 0;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view rest(raw);
    std::string_view label_token = next_token(rest);
    if (label_token.empty()) continue;  // blank line

    labels.push_back(parse_double(label_token, line_no, "label"));
    std::vector<Entry> column;
    std::size_t previous = 0;
    for (std::string_view token = next_token(rest); !token.empty(); token = next_token(rest)) {
      const std::size_t colon = token.find(':');
      if (colon == std::string_view::npos) throw ParseError(line_no, "expected idx:val, got '" + std::string(token) + "'");
      std::size_t index = 0;
      const std::string_view index_part = token.substr(0, colon);
      const auto [ptr, ec] = std::from_chars(index_part.data(), index_part.data() + index_part.size(), index);
      if (ec != std::errc() || ptr != index_part.data() + index_part.size() || index == 0) {
        throw ParseError(line_no, "malformed feature index '" + std::string(index_part) + "'");
      }
      if (index <= previous) throw ParseError(line_no, "feature indices must be strictly increasing");
      previous = index;
      const double value = parse_double(token.substr(colon + 1), line_no, "feature value");
      max_index = std::max(max_index, index);
      column.push_back({index - 1, value});
    }
    columns.push_back(std::move(column));
  }

  if (columns.empty()) throw ParseError(0, "empty LIBSVM input");
  if (max_index == 0) throw ParseError(line_no, "no features found");

  LabeledDataset out{DataMatrix(max_index, std::move(columns)), Vector(static_cast<Eigen::Index>(labels.size()))};
  for (std::size_t i = 0; i < labels.size(); ++i) out.labels[static_cast<Eigen::Index>(i)] = labels[i];
  return out;
}

LabeledDataset load_libsvm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_libsvm(buffer.str());
}

std::string format_libsvm(const LabeledDataset& data) {
  if (static_cast<std::size_t>(data.labels.size()) != data.matrix.cols()) {
    throw std::invalid_argument("format_libsvm: one label per column required");
  }
  std::string out;
  for (std::size_t c = 0; c < data.matrix.cols(); ++c) {
    out += shortest(data.labels[static_cast<Eigen::Index>(c)]);
    const SparseColumn col = data.matrix.column(c);
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      out += ' ';
      out += std::to_string(col.indices[k] + 1);
      out += ':';
      out += shortest(col.values[k]);
    }
    out += '\n';
  }
  return out;
}

void write_libsvm(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_libsvm(data);
}

}  // namespace pdcert
