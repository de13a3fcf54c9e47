#ifndef BMRF_INSTANCE_IO_HPP
#define BMRF_INSTANCE_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "bmrf/instance.hpp"

namespace bmrf {

class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// text format, see README; '#' starts a comment, tokens are whitespace-separated
bottleneck_instance load_instance(std::istream& in);
bottleneck_instance load_instance(const std::string& path);

// finite values are written with enough digits to round-trip bit-exactly
void save_instance(const bottleneck_instance& inst, std::ostream& out);
void save_instance(const bottleneck_instance& inst, const std::string& path);

}  // namespace bmrf

#endif
