#include "guard/audit/csv.hpp"

namespace guard::audit {

std::string csv_escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out.push_back(',');
        }
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

CsvParse parse_csv(std::string_view data) {
    CsvParse result;
    const std::size_t n = data.size();
    std::size_t i = 0;
    while (i < n) {
        std::vector<std::string> record;
        std::string field;
        bool complete = false;
        std::size_t j = i;
        while (j < n) {
            if (data[j] == '"') {
                ++j;  // quoted field
                bool closed = false;
                while (j < n) {
                    if (data[j] == '"') {
                        if (j + 1 < n && data[j + 1] == '"') {
                            field.push_back('"');
                            j += 2;
                        } else {
                            ++j;
                            closed = true;
                            break;
                        }
                    } else {
                        field.push_back(data[j]);
                        ++j;
                    }
                }
                if (!closed) {
                    break;  // torn inside quotes
                }
                continue;
            }
            const char c = data[j];
            if (c == ',') {
                record.push_back(std::move(field));
                field.clear();
                ++j;
            } else if (c == '\n') {
                ++j;
                complete = true;
                break;
            } else if (c == '\r' && j + 1 < n && data[j + 1] == '\n') {
                j += 2;
                complete = true;
                break;
            } else {
                field.push_back(c);
                ++j;
            }
        }
        if (!complete) {
            break;  // torn tail: stop, consumed stays at the last record boundary
        }
        record.push_back(std::move(field));
        if (!(record.size() == 1 && record[0].empty())) {
            result.records.push_back(std::move(record));
        }
        result.consumed = j;
        i = j;
    }
    return result;
}

}  // namespace guard::audit
