#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mothedge::csv {

// shortest round-trip decimal text for a double
std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
    double number(std::size_t row, std::size_t col) const;
};

Table read_file(const std::filesystem::path& path);

class Writer {
  public:
    explicit Writer(const std::filesystem::path& path);

    void row(const std::vector<std::string>& cells);
    void numeric_row(const std::vector<double>& cells);
    void cell_then_numbers(const std::string& first, const std::vector<double>& rest);

  private:
    std::ofstream out_;
};

}  // namespace mothedge::csv
