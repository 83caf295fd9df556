#pragma once

#include <rodeo/dataset.hpp>
#include <rodeo/engines.hpp>
#include <rodeo/errors.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rodeo {

//! Malformed dataset or trace file. Row and column are 1-based with the
//! header as row 1; 0 means "not applicable".
class DataFormatError : public Error
{
public:
  DataFormatError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
    : Error(what)
    , row(row)
    , column(column)
  {
  }

  std::size_t row;
  std::size_t column;
};

class EmptyFile : public DataFormatError
{
public:
  using DataFormatError::DataFormatError;
};

class MissingColumn : public DataFormatError
{
public:
  MissingColumn(const std::string& name, std::size_t column)
    : DataFormatError("missing column " + name, 1, column)
    , name(name)
  {
  }

  std::string name;
};

class NonNumericCell : public DataFormatError
{
public:
  using DataFormatError::DataFormatError;
};

//! CSV with header `x1,...,xd,y` (exactly these names, in this order),
//! '.' decimal separator, one observation per line.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

//! Shortest round-trip decimal representation, so load(save(D)) == D bitwise.
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

//! Shortest representation that parses back to the same double.
std::string format_double(double value);

//! Long-format trace, header `t,j,Z,s,lambda,h_before,h_after,active_after`.
//! j is 1-based in the file to match the x1..xd column names.
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> read_trace(std::istream& in);

//! Replays a trace: starting from h0 in every coordinate, applies each
//! record's h_after in file order.
Vector replay_trace(const std::vector<TraceRecord>& trace, std::size_t d, double h0);

} // namespace rodeo
