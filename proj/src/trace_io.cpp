#include "bayestrust/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "bayestrust/text.hpp"

namespace bayestrust {

namespace {

constexpr std::string_view kMagic = "#bayestrust-trace";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double real_field(std::string_view s) {
  const auto v = text::parse_real(s);
  if (!v) throw TraceFormatError("bad real '" + std::string(s) + "'");
  return *v;
}

std::uint64_t count_field(std::string_view s) {
  const auto v = text::parse_u64(s);
  if (!v) throw TraceFormatError("bad count '" + std::string(s) + "'");
  return *v;
}

std::vector<std::string_view> fields(std::string_view payload, std::size_t expected) {
  auto parts = text::split(payload, ',');
  if (expected != 0 && parts.size() != expected) {
    throw TraceFormatError("expected " + std::to_string(expected) + " payload fields, got " +
                           std::to_string(parts.size()));
  }
  return parts;
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += text::format_real(xs[i]);
  }
  return out;
}

std::string_view header_value(std::string_view field, std::string_view key) {
  if (field.size() <= key.size() || field.substr(0, key.size()) != key || field[key.size()] != '=') {
    throw TraceFormatError("expected header field '" + std::string(key) + "='");
  }
  return field.substr(key.size() + 1);
}

}  // namespace

std::string format_payload(const Observation& obs) {
  using text::format_real;
  return std::visit(overloaded{
                        [](const BinaryBatch& b) { return std::to_string(b.n) + ',' + std::to_string(b.m); },
                        [](const CategoricalBatch& c) {
                          std::string out;
                          for (std::size_t k = 0; k < c.counts.size(); ++k) {
                            if (k > 0) out += ',';
                            out += std::to_string(c.counts[k]);
                          }
                          return out;
                        },
                        [](const AdvisorReport& r) {
                          return format_real(r.advisor_trust) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m);
                        },
                        [](const VotingVector& v) { return format_real(v.y0) + ';' + join_reals(v.neighbors); },
                        [](const OpinionReport& o) {
                          const auto& op = o.opinion;
                          return format_real(op.belief()) + ',' + format_real(op.disbelief()) + ',' +
                                 format_real(op.ignorance()) + ',' + format_real(op.evidence_weight());
                        },
                    },
                    obs);
}

Observation parse_payload(std::string_view kind, std::string_view payload) {
  Observation obs;
  if (kind == "binary") {
    const auto f = fields(payload, 2);
    obs = BinaryBatch{count_field(f[0]), count_field(f[1])};
  } else if (kind == "categorical") {
    CategoricalBatch c;
    for (auto part : fields(payload, 0)) c.counts.push_back(count_field(part));
    obs = std::move(c);
  } else if (kind == "advisor") {
    const auto f = fields(payload, 3);
    obs = AdvisorReport{real_field(f[0]), count_field(f[1]), count_field(f[2])};
  } else if (kind == "voting") {
    const auto semi = payload.find(';');
    if (semi == std::string_view::npos) throw TraceFormatError("voting payload needs 'y0;y1,...'");
    VotingVector v;
    v.y0 = real_field(payload.substr(0, semi));
    const auto rest = payload.substr(semi + 1);
    if (!rest.empty()) {
      for (auto part : fields(rest, 0)) v.neighbors.push_back(real_field(part));
    }
    obs = std::move(v);
  } else if (kind == "opinion") {
    const auto f = fields(payload, 4);
    try {
      obs = OpinionReport{Opinion(real_field(f[0]), real_field(f[1]), real_field(f[2]), real_field(f[3]))};
    } catch (const std::invalid_argument& e) {
      throw TraceFormatError(e.what());
    }
  } else {
    throw TraceFormatError("unknown observation kind '" + std::string(kind) + "'");
  }
  try {
    validate(obs);
  } catch (const std::invalid_argument& e) {
    throw TraceFormatError(e.what());
  }
  return obs;
}

void write_trace(std::ostream& out, const sim::Trace& trace) {
  out << kMagic << "\tversion=" << trace.header.version << "\tseed=" << trace.header.seed
      << "\thorizon=" << trace.header.horizon << '\n';
  for (const auto& [id, profile] : trace.header.agents) out << "#agent\t" << id << '\t' << profile << '\n';
  for (const auto& r : trace.records) {
    out << r.step << '\t' << r.trustor << '\t' << r.trustee << '\t' << observation_kind(r.observation) << '\t'
        << format_payload(r.observation) << '\n';
  }
}

sim::Trace read_trace(std::istream& in) {
  sim::Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool seen_magic = false;
  std::uint64_t last_step = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto cols = text::split(line, '\t');
      if (!seen_magic) {
        if (cols[0] != kMagic || cols.size() != 4) throw TraceFormatError("missing trace header");
        const auto version = text::parse_u64(header_value(cols[1], "version"));
        if (!version || *version != 1) throw TraceFormatError("unsupported trace version");
        const auto seed = text::parse_u64(header_value(cols[2], "seed"));
        const auto horizon = text::parse_u64(header_value(cols[3], "horizon"));
        if (!seed || !horizon) throw TraceFormatError("bad seed or horizon");
        trace.header.version = static_cast<int>(*version);
        trace.header.seed = *seed;
        trace.header.horizon = *horizon;
        seen_magic = true;
        continue;
      }
      if (line.front() == '#') {
        if (cols[0] != "#agent" || cols.size() != 3) throw TraceFormatError("unknown header line");
        if (!trace.records.empty()) throw TraceFormatError("agent line after the first record");
        if (!trace.header.agents.emplace(std::string(cols[1]), std::string(cols[2])).second) {
          throw TraceFormatError("duplicate agent '" + std::string(cols[1]) + "'");
        }
        continue;
      }
      if (cols.size() != 5) throw TraceFormatError("record needs 5 tab-separated fields");
      sim::TraceRecord r;
      r.step = count_field(cols[0]);
      if (r.step < last_step) throw TraceFormatError("steps decrease");
      last_step = r.step;
      r.trustor = std::string(cols[1]);
      r.trustee = std::string(cols[2]);
      r.observation = parse_payload(cols[3], cols[4]);
      trace.records.push_back(std::move(r));
    } catch (const TraceFormatError& e) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!seen_magic) throw TraceFormatError("trace line 1: missing trace header");
  return trace;
}

void save_trace(const std::string& path, const sim::Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trace(out, trace);
  if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

sim::Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_trace(in);
}

}  // namespace bayestrust
