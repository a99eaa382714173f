#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdekit {

/// Serializes a double with 17 significant digits (round-trip exact).
inline std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }

    void header(const std::vector<std::string>& names) { write_strings(names); }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(csv_number(v));
        write_strings(cells);
    }

    void raw_row(const std::vector<std::string>& cells) { write_strings(cells); }

private:
    void write_strings(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    std::ofstream out_;
};

}  // namespace pdekit
