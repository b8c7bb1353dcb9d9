// reliefchain: consortium blockchain simulator for coordinated disaster relief
// Copyright 2026 The reliefchain Authors.
// SPDX-License-Identifier: Apache-2.0

#include <reliefchain/rlp.hpp>

namespace reliefchain::rlp {

namespace {

// Length prefix: offset 0x80 for strings, 0xc0 for lists.
// <= 55 bytes: one byte (offset + len); otherwise offset + 55 + len-of-len,
// then the length in minimal big-endian form.
void append_length(Bytes& out, std::size_t len, std::uint8_t offset)
{
    if (len <= 55) {
        out.push_back(static_cast<std::uint8_t>(offset + len));
        return;
    }
    const Bytes len_be = minimal_be(len);
    out.push_back(static_cast<std::uint8_t>(offset + 55 + len_be.size()));
    out.insert(out.end(), len_be.begin(), len_be.end());
}

void encode_into(Bytes& out, const Item& item)
{
    if (item.is_string()) {
        const Bytes& s = item.str();
        if (s.size() == 1 && s[0] < 0x80) {
            out.push_back(s[0]);
            return;
        }
        append_length(out, s.size(), 0x80);
        out.insert(out.end(), s.begin(), s.end());
        return;
    }
    Bytes body;
    for (const Item& child : item.list())
        encode_into(body, child);
    append_length(out, body.size(), 0xc0);
    out.insert(out.end(), body.begin(), body.end());
}

struct Reader {
    BytesView data;
    std::size_t pos = 0;

    std::uint8_t take()
    {
        if (pos >= data.size())
            throw DecodeError("truncated rlp input");
        return data[pos++];
    }

    BytesView take_span(std::size_t n)
    {
        if (pos + n > data.size())
            throw DecodeError("truncated rlp input");
        const auto s = data.subspan(pos, n);
        pos += n;
        return s;
    }

    std::size_t read_long_length(std::size_t len_of_len)
    {
        const auto raw = take_span(len_of_len);
        if (raw[0] == 0)
            throw DecodeError("length has leading zero");
        std::size_t len = 0;
        for (auto b : raw) {
            if (len > (SIZE_MAX >> 8))
                throw DecodeError("length overflow");
            len = len << 8 | b;
        }
        if (len <= 55)
            throw DecodeError("non-minimal long-form length");
        return len;
    }

    Item read_item()
    {
        const std::uint8_t tag = take();
        if (tag < 0x80)
            return string_item(BytesView{&data[pos - 1], 1});
        if (tag <= 0xb7) {
            const std::size_t len = tag - 0x80;
            const auto s = take_span(len);
            if (len == 1 && s[0] < 0x80)
                throw DecodeError("single byte below 0x80 must self-encode");
            return string_item(s);
        }
        if (tag <= 0xbf) {
            const std::size_t len = read_long_length(tag - 0xb7);
            return string_item(take_span(len));
        }
        std::size_t body_len;
        if (tag <= 0xf7) {
            body_len = tag - 0xc0;
        } else {
            body_len = read_long_length(tag - 0xf7);
        }
        const std::size_t end = pos + body_len;
        if (end > data.size())
            throw DecodeError("truncated rlp list body");
        std::vector<Item> children;
        while (pos < end)
            children.push_back(read_item());
        if (pos != end)
            throw DecodeError("list body length mismatch");
        return Item{std::move(children)};
    }
};

}  // namespace

Item string_item(BytesView data)
{
    return Item{Bytes(data.begin(), data.end())};
}

Item u64_item(std::uint64_t v)
{
    return Item{minimal_be(v)};
}

Item address_item(const Address& a)
{
    return string_item(a.bytes);
}

Item hash_item(const Hash32& h)
{
    return string_item(h.bytes);
}

Bytes encode(const Item& item)
{
    Bytes out;
    encode_into(out, item);
    return out;
}

Item decode(BytesView data)
{
    Reader r{data};
    Item item = r.read_item();
    if (r.pos != data.size())
        throw DecodeError("trailing bytes after rlp item");
    return item;
}

}  // namespace reliefchain::rlp
