#include "varlp/online_sim.hpp"

#include <sstream>
#include <stdexcept>

namespace varlp {

SimInstance read_instance(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("instance: missing header");
  std::istringstream header(line);
  long n_online = 0;
  SimInstance inst;
  if (!(header >> inst.n_offline >> n_online >> inst.capacity) || inst.n_offline < 0 || n_online < 0)
    throw std::runtime_error("instance: header must be 'n_offline n_online b'");
  inst.arrivals.reserve(n_online);
  for (long q = 0; q < n_online; ++q) {
    if (!std::getline(in, line)) throw std::runtime_error("instance: expected " + std::to_string(n_online) + " arrival lines");
    std::istringstream row(line);
    std::vector<int> nbrs;
    int v = 0;
    while (row >> v) {
      if (v < 1 || v > inst.n_offline)
        throw std::runtime_error("instance: neighbour " + std::to_string(v) + " out of range on arrival " + std::to_string(q + 1));
      nbrs.push_back(v - 1);
    }
    if (!row.eof()) throw std::runtime_error("instance: bad token on arrival " + std::to_string(q + 1));
    inst.arrivals.push_back(std::move(nbrs));
  }
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
  return inst;
}

void write_instance(std::ostream& out, const SimInstance& instance) {
  out << instance.n_offline << ' ' << instance.n_online() << ' ' << instance.capacity << '\n';
  for (const auto& nbrs : instance.arrivals) {
    for (std::size_t k = 0; k < nbrs.size(); ++k) out << (k ? " " : "") << nbrs[k] + 1;
    out << '\n';
  }
}

}  // namespace varlp
