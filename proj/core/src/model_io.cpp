#include <array>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "srli/errors.hpp"
#include "srli/training.hpp"

namespace srli {

namespace {

constexpr char kMagic[4] = {'R', 'F', 'R', 'G'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint32_t crc32(const unsigned char* data, std::size_t len) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void bytes(const void* p, std::size_t n) {
        buf_.append(static_cast<const char*>(p), n);
    }
    void doubles(const std::vector<double>& v) {
        for (double x : v) f64(x);
    }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const char* p, std::size_t n) : p_(p), n_(n) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p_[pos_++])) << (8 * i);
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::string str(std::size_t n) {
        need(n);
        std::string s(p_ + pos_, n);
        pos_ += n;
        return s;
    }
    void doubles(std::vector<double>& out, std::size_t n) {
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = f64();
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return n_ - pos_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > n_) throw ModelIoError("model file truncated");
    }
    const char* p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

void write_vocab(Writer& w, const StringIndex& v) {
    w.u64(v.size());
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        const std::string& s = v.text(i);
        w.u32(static_cast<std::uint32_t>(s.size()));
        w.bytes(s.data(), s.size());
        w.u64(v.frequency(i));
    }
}

StringIndex read_vocab(Reader& r) {
    StringIndex v;
    std::uint64_t n = r.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t len = r.u32();
        std::string s = r.str(len);
        std::uint64_t count = r.u64();
        v.intern(s, count);
    }
    if (v.size() != n) throw ModelIoError("duplicate vocabulary entries in model file");
    return v;
}

nlohmann::json config_to_json(const TrainConfig& c) {
    return nlohmann::json{
        {"numRoles", c.numRoles},       {"dimD", c.dimD},
        {"dimK", c.dimK},               {"negatives", c.negatives},
        {"epochs", c.epochs},           {"learningRate", c.learningRate},
        {"adagradEpsilon", c.adagradEpsilon}, {"initScale", c.initScale},
        {"minLemmaFreq", c.minLemmaFreq},     {"predMinFreq", c.predMinFreq},
        {"seed", c.seed},               {"deterministic", c.deterministic},
        {"clipNorm", c.clipNorm},       {"batchSize", c.batchSize},
        {"threads", c.threads},
    };
}

TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.numRoles = j.at("numRoles").get<std::uint32_t>();
    c.dimD = j.at("dimD").get<int>();
    c.dimK = j.at("dimK").get<int>();
    c.negatives = j.at("negatives").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.learningRate = j.at("learningRate").get<double>();
    c.adagradEpsilon = j.at("adagradEpsilon").get<double>();
    c.initScale = j.at("initScale").get<double>();
    c.minLemmaFreq = j.at("minLemmaFreq").get<std::uint64_t>();
    c.predMinFreq = j.at("predMinFreq").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.deterministic = j.at("deterministic").get<bool>();
    c.clipNorm = j.at("clipNorm").get<double>();
    c.batchSize = j.at("batchSize").get<int>();
    c.threads = j.at("threads").get<int>();
    return c;
}

} // namespace

void save_model(const ModelBundle& model, const std::string& path) {
    Writer w;
    w.bytes(kMagic, 4);
    w.u32(kFormatVersion);

    nlohmann::json header = config_to_json(model.config);
    header["sizes"] = {
        {"features", model.vocab.features.size()},
        {"argLemmas", model.vocab.argLemmas.size()},
        {"predicates", model.vocab.predicates.size()},
        {"deprels", model.vocab.deprels.size()},
        {"predMatrices", model.params.dec.cPred.size()},
    };
    std::string headerStr = header.dump();
    w.u32(static_cast<std::uint32_t>(headerStr.size()));
    w.bytes(headerStr.data(), headerStr.size());

    write_vocab(w, model.vocab.argLemmas);
    write_vocab(w, model.vocab.features);
    write_vocab(w, model.vocab.predicates);
    write_vocab(w, model.vocab.deprels);

    w.doubles(model.params.enc.weights);
    w.doubles(model.params.dec.u);
    w.doubles(model.params.dec.cShared);
    w.u64(model.params.dec.cPred.size());
    for (const auto& [pred, mats] : model.params.dec.cPred) {
        w.u32(pred);
        w.doubles(mats);
    }

    std::uint32_t crc = crc32(reinterpret_cast<const unsigned char*>(w.data().data()), w.data().size());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelIoError("cannot open '" + path + "' for writing");
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    char crcBytes[4];
    for (int i = 0; i < 4; ++i) crcBytes[i] = static_cast<char>((crc >> (8 * i)) & 0xffu);
    out.write(crcBytes, 4);
    if (!out) throw ModelIoError("write failure on '" + path + "'");
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError("cannot open model file '" + path + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (data.size() < 12) throw ModelIoError("model file truncated");
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
        stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[data.size() - 4 + static_cast<std::size_t>(i)])) << (8 * i);
    std::uint32_t actual = crc32(reinterpret_cast<const unsigned char*>(data.data()), data.size() - 4);
    if (stored != actual) throw ModelIoError("model checksum mismatch (corrupt or truncated file)");

    Reader r(data.data(), data.size() - 4);
    if (r.str(4) != std::string(kMagic, 4)) throw ModelIoError("not a model file (bad magic)");
    std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        throw ModelIoError("unsupported model format version " + std::to_string(version));

    std::uint32_t headerLen = r.u32();
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(r.str(headerLen));
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(std::string("bad model header: ") + e.what());
    }

    ModelBundle model;
    try {
        model.config = config_from_json(header);
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(std::string("bad model header: ") + e.what());
    }

    model.vocab.argLemmas = read_vocab(r);
    model.vocab.features = read_vocab(r);
    model.vocab.predicates = read_vocab(r);
    model.vocab.deprels = read_vocab(r);
    model.vocab.unkId = 0;

    const auto& sizes = header.at("sizes");
    if (sizes.at("features").get<std::uint64_t>() != model.vocab.features.size() ||
        sizes.at("argLemmas").get<std::uint64_t>() != model.vocab.argLemmas.size() ||
        sizes.at("predicates").get<std::uint64_t>() != model.vocab.predicates.size() ||
        sizes.at("deprels").get<std::uint64_t>() != model.vocab.deprels.size())
        throw ModelIoError("model header sizes disagree with stored vocabularies");

    model.params.enc = EncoderParams(model.config.numRoles, model.vocab.features.size());
    r.doubles(model.params.enc.weights, model.params.enc.weights.size());

    model.params.dec = DecoderParams(model.vocab.argLemmas.size(), model.config.numRoles,
                                     model.config.dimD, model.config.dimK);
    r.doubles(model.params.dec.u, model.params.dec.u.size());
    r.doubles(model.params.dec.cShared, model.params.dec.cShared.size());

    std::uint64_t predBlocks = r.u64();
    if (predBlocks != sizes.at("predMatrices").get<std::uint64_t>())
        throw ModelIoError("model header predicate-matrix count disagrees with stored blocks");
    for (std::uint64_t i = 0; i < predBlocks; ++i) {
        std::uint32_t pred = r.u32();
        if (pred >= model.vocab.predicates.size())
            throw ModelIoError("predicate matrix block for out-of-range predicate id");
        std::vector<double> mats;
        r.doubles(mats, model.params.dec.cShared.size());
        model.params.dec.cPred.emplace(pred, std::move(mats));
    }
    if (r.remaining() != 0) throw ModelIoError("trailing bytes after model payload");
    return model;
}

} // namespace srli
