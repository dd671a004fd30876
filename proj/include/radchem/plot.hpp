#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace radchem
{

/// Requested column absent from the table.
class PlotError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Column-major numeric table read from a CSV with a header row.
/// Non-numeric cells are stored as NaN.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
    std::vector<double> const& column(std::string const& name) const;
};

Table read_csv_table(std::istream& in);

/// Line chart of `columns` against the first table column. The y axis is
/// logarithmic when the positive values span more than three decades.
void render_svg(std::ostream& os,
                Table const& table,
                std::vector<std::string> const& columns);

/// Decision used by render_svg (exposed for testing).
bool wants_log_axis(Table const& table, std::vector<std::string> const& columns);

}  // namespace radchem
