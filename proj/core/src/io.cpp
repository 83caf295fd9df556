#include <rodeo/io.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rodeo {

namespace {

std::vector<std::string> split_line(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

std::string trim(std::string s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value)
{
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+')
    ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && begin != end;
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& row)
{
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty())
      return true;
  }
  return false;
}

} // namespace

std::string format_double(double value)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset read_dataset(std::istream& in)
{
  std::string line;
  std::size_t row = 0;
  if (!next_content_line(in, line, row))
    throw EmptyFile("dataset file is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);

  auto header = split_line(line);
  for (auto& h : header)
    h = trim(h);

  // x1..xd must be contiguous and followed by a final y column
  std::size_t d = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string expected = "x" + std::to_string(c + 1);
    if (header[c] == expected) {
      d = c + 1;
      continue;
    }
    if (header[c] == "y" && c + 1 == header.size())
      break;
    throw MissingColumn(expected, c + 1);
  }
  if (header.empty() || header.back() != "y")
    throw MissingColumn("y", header.size() + 1);
  if (d == 0)
    throw MissingColumn("x1", 1);

  std::vector<std::vector<double>> rows;
  while (next_content_line(in, line, row)) {
    const auto cells = split_line(line);
    if (cells.size() != d + 1)
      throw DataFormatError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(d + 1),
                            row, 0);
    std::vector<double> values(d + 1);
    for (std::size_t c = 0; c <= d; ++c) {
      if (!parse_double(trim(cells[c]), values[c]) || !std::isfinite(values[c]))
        throw NonNumericCell("non-numeric cell '" + cells[c] + "' at row " + std::to_string(row) +
                               ", column " + std::to_string(c + 1),
                             row, c + 1);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty())
    throw EmptyFile("dataset has a header but no rows", 1, 0);

  Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  Vector Y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < d; ++c)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    Y[static_cast<Eigen::Index>(i)] = rows[i][d];
  }
  return Dataset(std::move(X), std::move(Y));
}

Dataset load_dataset(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open dataset " + path.string());
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& data)
{
  for (std::size_t j = 0; j < data.d(); ++j)
    out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.X().rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X().cols(); ++j)
      out << format_double(data.X()(i, j)) << ',';
    out << format_double(data.Y()[i]) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data)
{
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write dataset " + path.string());
  write_dataset(out, data);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace)
{
  out << "t,j,Z,s,lambda,h_before,h_after,active_after\n";
  for (const auto& r : trace) {
    out << r.t << ',' << (r.j + 1) << ',' << format_double(r.Z) << ',' << format_double(r.s) << ','
        << format_double(r.lambda) << ',' << format_double(r.h_before) << ',' << format_double(r.h_after) << ','
        << (r.active_after ? 1 : 0) << '\n';
  }
}

std::vector<TraceRecord> read_trace(std::istream& in)
{
  std::string line;
  std::size_t row = 0;
  if (!next_content_line(in, line, row))
    throw EmptyFile("trace file is empty");
  if (trim(line) != "t,j,Z,s,lambda,h_before,h_after,active_after")
    throw DataFormatError("unexpected trace header", 1, 0);

  std::vector<TraceRecord> trace;
  while (next_content_line(in, line, row)) {
    const auto cells = split_line(line);
    if (cells.size() != 8)
      throw DataFormatError("trace row " + std::to_string(row) + " does not have 8 cells", row, 0);
    double v[8];
    for (std::size_t c = 0; c < 8; ++c)
      if (!parse_double(trim(cells[c]), v[c]))
        throw NonNumericCell("non-numeric trace cell at row " + std::to_string(row), row, c + 1);
    if (v[1] < 1.0)
      throw DataFormatError("trace variable index must be >= 1", row, 2);
    trace.push_back({ static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]) - 1, v[2], v[3], v[4], v[5],
                      v[6], v[7] != 0.0 });
  }
  return trace;
}

Vector replay_trace(const std::vector<TraceRecord>& trace, std::size_t d, double h0)
{
  Vector h = Vector::Constant(static_cast<Eigen::Index>(d), h0);
  for (const auto& r : trace) {
    if (r.j >= d)
      throw DataFormatError("trace variable index out of range");
    h[static_cast<Eigen::Index>(r.j)] = r.h_after;
  }
  return h;
}

} // namespace rodeo
