#include "budgeted_efx/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "budgeted_efx/errors.hpp"

namespace budgeted_efx {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

const Json& array_member(const Json& obj, const char* key, const std::string& where) {
  const Json& arr = member(obj, key, where);
  if (!arr.is_array()) fail(where + "." + key, "expected an array");
  return arr;
}

void check_id(const Json& obj, std::size_t expected, const std::string& where) {
  const Json& id = member(obj, "id", where);
  if (!id.is_number_unsigned() || id.get<std::uint64_t>() != expected) {
    fail(where + ".id", "expected id " + std::to_string(expected) +
                            " (ids must be dense, ordered and unique)");
  }
}

GoodId good_from_json(const Json& j, const Instance& instance, const std::string& where) {
  if (!j.is_number_unsigned()) fail(where, "expected a good id");
  const auto g = j.get<std::uint64_t>();
  if (g >= instance.num_goods()) fail(where, "unknown good id " + std::to_string(g));
  return static_cast<GoodId>(g);
}

}  // namespace

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected an integer or a \"p/q\" string");
}

Json rational_to_json(const Rational& r) { return r.str(); }

Instance instance_from_json(const Json& j) {
  const Json& goods = array_member(j, "goods", "instance");
  const Json& agents = array_member(j, "agents", "instance");
  std::vector<Rational> costs;
  for (std::size_t g = 0; g < goods.size(); ++g) {
    const std::string where = "goods[" + std::to_string(g) + "]";
    check_id(goods[g], g, where);
    costs.push_back(rational_from_json(member(goods[g], "cost", where), where + ".cost"));
  }
  std::vector<AgentSpec> specs;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agents[" + std::to_string(i) + "]";
    check_id(agents[i], i, where);
    AgentSpec spec;
    spec.budget = rational_from_json(member(agents[i], "budget", where), where + ".budget");
    const Json& values = array_member(agents[i], "values", where);
    if (values.size() != costs.size()) {
      fail(where + ".values", "has " + std::to_string(values.size()) + " entries for " +
                                  std::to_string(costs.size()) + " goods");
    }
    for (std::size_t g = 0; g < values.size(); ++g) {
      spec.values.push_back(
          rational_from_json(values[g], where + ".values[" + std::to_string(g) + "]"));
    }
    specs.push_back(std::move(spec));
  }
  try {
    return Instance(std::move(costs), std::move(specs));
  } catch (const StructuralError& e) {
    fail("instance", e.what());
  }
}

Json instance_to_json(const Instance& instance) {
  Json goods = Json::array();
  for (GoodId g = 0; g < instance.num_goods(); ++g) {
    goods.push_back({{"id", g}, {"cost", rational_to_json(instance.cost(g))}});
  }
  Json agents = Json::array();
  for (AgentId i = 0; i < instance.num_agents(); ++i) {
    Json values = Json::array();
    for (GoodId g = 0; g < instance.num_goods(); ++g) {
      values.push_back(rational_to_json(instance.value(i, g)));
    }
    agents.push_back(
        {{"id", i}, {"budget", rational_to_json(instance.budget(i))}, {"values", values}});
  }
  return {{"goods", goods}, {"agents", agents}};
}

std::string serialize_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

Allocation allocation_from_json(const Json& j, const Instance& instance) {
  const Json* root = &j;
  if (j.is_object() && !j.contains("bundles") && j.contains("allocation")) root = &j["allocation"];
  const Json& bundles_json = array_member(*root, "bundles", "allocation");
  if (bundles_json.size() != instance.num_agents()) {
    fail("allocation.bundles", "has " + std::to_string(bundles_json.size()) + " bundles for " +
                                   std::to_string(instance.num_agents()) + " agents");
  }
  std::vector<Bundle> bundles;
  for (std::size_t i = 0; i < bundles_json.size(); ++i) {
    const std::string where = "allocation.bundles[" + std::to_string(i) + "]";
    if (!bundles_json[i].is_array()) fail(where, "expected an array of good ids");
    Bundle b;
    for (std::size_t k = 0; k < bundles_json[i].size(); ++k) {
      const GoodId g = good_from_json(bundles_json[i][k], instance,
                                      where + "[" + std::to_string(k) + "]");
      if (b.contains(g)) fail(where, "repeats good " + std::to_string(g));
      b.insert(g);
    }
    bundles.push_back(b);
  }
  try {
    return Allocation(instance, std::move(bundles));
  } catch (const StructuralError& e) {
    fail("allocation", e.what());
  }
}

Json bundle_to_json(const Bundle& bundle) {
  Json arr = Json::array();
  for (GoodId g : bundle) arr.push_back(g);
  return arr;
}

Json allocation_to_json(const Allocation& allocation) {
  Json bundles = Json::array();
  for (const Bundle& b : allocation.bundles()) bundles.push_back(bundle_to_json(b));
  return {{"bundles", bundles}, {"unallocated", bundle_to_json(allocation.unallocated())}};
}

std::vector<Instance> corpus_from_json(const Json& j) {
  const Json& arr = array_member(j, "instances", "corpus");
  std::vector<Instance> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    try {
      out.push_back(instance_from_json(arr[k]));
    } catch (const ParseError& e) {
      fail("corpus.instances[" + std::to_string(k) + "]", e.what());
    }
  }
  return out;
}

Json corpus_to_json(const std::vector<Instance>& instances) {
  Json arr = Json::array();
  for (const auto& inst : instances) arr.push_back(instance_to_json(inst));
  return {{"instances", arr}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Json load_json(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(load_json(path));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw ParseError(path.string() + ": " + what);
  }
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int k = 0; k < length; ++k) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return out.str();
}

}  // namespace budgeted_efx
