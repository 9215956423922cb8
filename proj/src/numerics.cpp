#include "qcdsim/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qcdsim {

Complex phi1(Complex z) {
  if (std::abs(z) < 0.5) {
    // Taylor series sum_k z^k / (k+1)!; 20 terms reach double precision here.
    Complex term{1.0, 0.0};
    Complex sum{1.0, 0.0};
    for (int k = 1; k < 24; ++k) {
      term *= z / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("QCDSIM_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return 1;
}

namespace {

std::string to_chars_string(double value, int precision) {
  char buf[64];
  std::to_chars_result r = precision < 0
                               ? std::to_chars(buf, buf + sizeof buf, value)
                               : std::to_chars(buf, buf + sizeof buf, value,
                                               std::chars_format::general, precision);
  return std::string(buf, r.ptr);
}

int significant_digits(const std::string& s) {
  int digits = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++digits;
  }
  return digits;
}

}  // namespace

std::string format_g12(double value) {
  if (value == 0.0) return "0";
  std::string shortest = to_chars_string(value, -1);
  if (significant_digits(shortest) <= 12) return shortest;
  return to_chars_string(value, 12);
}

std::string format_g17(double value) {
  if (value == 0.0) return "0";
  return to_chars_string(value, -1);
}

}  // namespace qcdsim
