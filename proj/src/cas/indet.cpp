#include "pgfcheck/cas/indet.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace pgfcheck::cas {

namespace detail {
struct IndetRecord {
  std::string name;
  IndetKind kind;
};
}  // namespace detail

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::pair<IndetKind, std::string>, std::unique_ptr<detail::IndetRecord>, std::less<>> records;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Indet Indet::get(std::string_view name, IndetKind kind) {
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  auto key = std::make_pair(kind, std::string(name));
  auto it = reg.records.find(key);
  if (it == reg.records.end()) {
    auto rec = std::make_unique<detail::IndetRecord>(detail::IndetRecord{std::string(name), kind});
    it = reg.records.emplace(std::move(key), std::move(rec)).first;
  }
  return Indet(it->second.get());
}

Indet Indet::placeholder() {
  static const Indet t = get("T", IndetKind::Placeholder);
  return t;
}

const std::string& Indet::name() const { return rec_->name; }

IndetKind Indet::kind() const { return rec_->kind; }

std::strong_ordering operator<=>(Indet a, Indet b) {
  if (a.rec_ == b.rec_) return std::strong_ordering::equal;
  if (auto c = a.rec_->kind <=> b.rec_->kind; c != 0) return c;
  return a.rec_->name.compare(b.rec_->name) <=> 0;
}

}  // namespace pgfcheck::cas
