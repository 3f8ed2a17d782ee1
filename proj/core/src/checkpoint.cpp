#include "xlab/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

constexpr char kMagic[8] = {'E', 'X', 'P', 'L', 'M', 'D', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

struct Writer {
    std::ofstream out;
    explicit Writer(const std::string& path) : out(path, std::ios::binary) {
        if (!out) throw ParameterError("cannot open file for writing: " + path);
    }
    void bytes(const void* p, std::size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u16(std::uint16_t v) { le(&v, 2); }
    void u32(std::uint32_t v) { le(&v, 4); }
    void f64(double v) { le(&v, 8); }
    void le(const void* p, std::size_t n) {
        // assumes little-endian host byte order for the in-memory value
        unsigned char buf[8];
        std::memcpy(buf, p, n);
        bytes(buf, n);
    }
    void str(const std::string& s) {
        u16(static_cast<std::uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

struct Reader {
    std::ifstream in;
    std::string path;
    std::size_t offset = 0;
    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw ParameterError("cannot open file: " + p);
    }
    void bytes(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw FormatError(path + ": truncated checkpoint", offset + static_cast<std::size_t>(in.gcount()));
        offset += n;
    }
    std::uint16_t u16() { std::uint16_t v; bytes(&v, 2); return v; }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
    double f64() { double v; bytes(&v, 8); return v; }
    std::string str() {
        const std::uint16_t n = u16();
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }
};

struct NamedTensor {
    std::string name;
    const Matrix* mat = nullptr;
    const Vector* vec = nullptr;
};

void collect_mlp(const std::string& prefix, const MlpParams& p, std::vector<NamedTensor>& out) {
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        out.push_back({prefix + ".layer" + std::to_string(i) + ".w", &p.layers[i].w, nullptr});
        out.push_back({prefix + ".layer" + std::to_string(i) + ".b", nullptr, &p.layers[i].b});
    }
}

std::vector<NamedTensor> collect(const ModelBundle& b) {
    std::vector<NamedTensor> out;
    if (const auto* lin = std::get_if<LinearModel>(&b.model)) {
        out.push_back({"bias", nullptr, &lin->bias});
        out.push_back({"weights", &lin->weights, nullptr});
    } else if (const auto* mlp = std::get_if<MlpClassifier>(&b.model)) {
        collect_mlp("net", mlp->net, out);
    } else if (const auto* moe = std::get_if<MoeModel>(&b.model)) {
        collect_mlp("gate", moe->gate, out);
        out.push_back({"experts.bias", &moe->experts.bias, nullptr});
        out.push_back({"experts.weights", &moe->experts.weights, nullptr});
    } else {
        const auto& cen = std::get<CenModel>(b.model);
        collect_mlp("encoder", cen.encoder, out);
        out.push_back({"dict.bias", &cen.dict.bias, nullptr});
        out.push_back({"dict.weights", &cen.dict.weights, nullptr});
    }
    if (!b.standardizer.mean.empty()) {
        out.push_back({"standardizer.mean", nullptr, &b.standardizer.mean});
        out.push_back({"standardizer.sd", nullptr, &b.standardizer.sd});
    }
    return out;
}

}  // namespace

void save_model(const std::string& path, const ModelBundle& bundle) {
    Writer w(path);
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(kind_of(bundle.model)));
    w.u32(static_cast<std::uint32_t>(bundle.feature_kind));
    w.u32(static_cast<std::uint32_t>(bundle.feature_params.pxl.grid));
    w.u32(static_cast<std::uint32_t>(bundle.feature_params.hog.cell));
    w.u32(static_cast<std::uint32_t>(bundle.feature_params.hog.bins));
    w.u32(static_cast<std::uint32_t>(bundle.feature_params.hog.block));
    w.u32(static_cast<std::uint32_t>(bundle.feature_params.hog.stride));
    w.f64(bundle.feature_params.hog.eps);

    const auto tensors = collect(bundle);
    w.u32(static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        w.str(t.name);
        if (t.mat) {
            w.u32(static_cast<std::uint32_t>(t.mat->rows()));
            w.u32(static_cast<std::uint32_t>(t.mat->cols()));
        } else {
            w.u32(1);
            w.u32(static_cast<std::uint32_t>(t.vec->size()));
        }
    }
    for (const auto& t : tensors) {
        const double* data = t.mat ? t.mat->data() : t.vec->data();
        const std::size_t n = t.mat ? t.mat->size() : t.vec->size();
        for (std::size_t i = 0; i < n; ++i) w.f64(data[i]);
    }
    if (!w.out) throw ParameterError("failed writing checkpoint to " + path);
}

ModelBundle load_model(const std::string& path) {
    Reader r(path);
    char magic[8];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw FormatError(path + ": not a model checkpoint (bad magic)", 0);
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version), 8);
    const auto kind = static_cast<ModelKind>(r.u32());
    ModelBundle b;
    b.feature_kind = static_cast<FeatureKind>(r.u32());
    b.feature_params.pxl.grid = r.u32();
    b.feature_params.hog.cell = r.u32();
    b.feature_params.hog.bins = r.u32();
    b.feature_params.hog.block = r.u32();
    b.feature_params.hog.stride = r.u32();
    b.feature_params.hog.eps = r.f64();

    struct Shape {
        std::string name;
        std::uint32_t rows, cols;
    };
    const std::uint32_t count = r.u32();
    std::vector<Shape> shapes(count);
    for (auto& s : shapes) {
        s.name = r.str();
        s.rows = r.u32();
        s.cols = r.u32();
    }
    std::vector<Matrix> tensors;
    tensors.reserve(count);
    for (const auto& s : shapes) {
        Matrix m(s.rows, s.cols);
        for (double& v : m.storage()) v = r.f64();
        tensors.push_back(std::move(m));
    }

    auto find = [&](const std::string& name) -> const Matrix& {
        for (std::size_t i = 0; i < shapes.size(); ++i)
            if (shapes[i].name == name) return tensors[i];
        throw FormatError(path + ": checkpoint is missing tensor '" + name + "'", r.offset);
    };
    auto build_mlp = [&](const std::string& prefix) {
        MlpParams p;
        for (std::size_t i = 0;; ++i) {
            const std::string base = prefix + ".layer" + std::to_string(i);
            bool present = false;
            for (const auto& s : shapes)
                if (s.name == base + ".w") present = true;
            if (!present) break;
            AffineLayer l;
            l.w = find(base + ".w");
            l.b = find(base + ".b").row_copy(0);
            p.layers.push_back(std::move(l));
        }
        if (p.layers.empty())
            throw FormatError(path + ": checkpoint has no layers under '" + prefix + "'", r.offset);
        p.validate();
        return p;
    };

    switch (kind) {
        case ModelKind::linear: {
            LinearModel m;
            m.bias = find("bias").row_copy(0);
            m.weights = find("weights");
            b.model = std::move(m);
            break;
        }
        case ModelKind::mlp:
            b.model = MlpClassifier{build_mlp("net")};
            break;
        case ModelKind::moe: {
            MoeModel m;
            m.gate = build_mlp("gate");
            m.experts.bias = find("experts.bias");
            m.experts.weights = find("experts.weights");
            m.experts.validate();
            b.model = std::move(m);
            break;
        }
        case ModelKind::cen: {
            CenModel m;
            m.encoder = build_mlp("encoder");
            m.dict.bias = find("dict.bias");
            m.dict.weights = find("dict.weights");
            m.dict.validate();
            b.model = std::move(m);
            break;
        }
        default:
            throw FormatError(path + ": unknown model kind in checkpoint", 12);
    }
    bool have_std = false;
    for (const auto& s : shapes)
        if (s.name == "standardizer.mean") have_std = true;
    if (have_std) {
        b.standardizer.mean = find("standardizer.mean").row_copy(0);
        b.standardizer.sd = find("standardizer.sd").row_copy(0);
    }
    return b;
}

}  // namespace xlab
