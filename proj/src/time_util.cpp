#include "guard/time_util.hpp"

#include <cstdio>

namespace guard {

namespace chr = std::chrono;

Timestamp now_utc() {
    return chr::time_point_cast<chr::seconds>(chr::system_clock::now());
}

Date date_of(Timestamp at) {
    return Date{chr::floor<chr::days>(at)};
}

int hour_of(Timestamp at) {
    const auto day_start = chr::floor<chr::days>(at);
    const chr::hh_mm_ss tod{at - day_start};
    return static_cast<int>(tod.hours().count());
}

Timestamp make_timestamp(int year, int month, int day, int hour, int minute, int second) {
    const chr::sys_days d = chr::year{year} / month / day;
    return chr::time_point_cast<chr::seconds>(d) + chr::hours{hour} + chr::minutes{minute} +
           chr::seconds{second};
}

Date make_date(int year, int month, int day) {
    return chr::year{year} / month / day;
}

std::string format_timestamp(Timestamp at) {
    const auto d = date_of(at);
    const auto day_start = chr::floor<chr::days>(at);
    const chr::hh_mm_ss tod{at - day_start};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", int(d.year()),
                  unsigned(d.month()), unsigned(d.day()), int(tod.hours().count()),
                  int(tod.minutes().count()), int(tod.seconds().count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char tail = 0;
    const std::string str(text);
    if (std::sscanf(str.c_str(), "%d-%d-%dT%d:%d:%d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
        tail != 'Z') {
        return std::nullopt;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60) {
        return std::nullopt;
    }
    const Date ymd = make_date(y, mo, d);
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return make_timestamp(y, mo, d, h, mi, s);
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                  unsigned(d.day()));
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    int y = 0, mo = 0, d = 0;
    char tail = 0;
    const std::string str(text);
    if (std::sscanf(str.c_str(), "%d-%d-%d%c", &y, &mo, &d, &tail) != 3) {
        return std::nullopt;
    }
    const Date ymd = make_date(y, mo, d);
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return ymd;
}

}  // namespace guard
