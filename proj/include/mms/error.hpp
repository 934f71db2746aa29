#ifndef MMS_ERROR_HPP
#define MMS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mms {

// Error categories map onto the CLI exit codes: config=2, data=3, runtime=4.
enum class ErrorKind { config = 2, data = 3, runtime = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorKind::config, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorKind::data, msg); }
inline Error runtime_failure(const std::string& msg) { return Error(ErrorKind::runtime, msg); }

} // namespace mms

#endif
