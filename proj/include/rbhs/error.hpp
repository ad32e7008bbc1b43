#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbhs
{
    enum class ErrorCode
    {
        ParseError,
        DuplicateEdge,
        SelfLoop,
        EmptyGraph,
        InfeasibleSpec,
        NotAdjacent,
        NotBiconnected,
        InvalidOrdering,
        IndexError,
        InvalidParams,
        ProtocolBug,
        WhiteboardOverflow,
        NoWhiteboard,
        RunawayProtocol,
        PoolExhausted,
        IoError,
    };

    std::string_view to_string(ErrorCode code) noexcept;

    // Every failure raised by the library carries one of the codes above so
    // callers (and tests) can match on the kind rather than on message text.
    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), m_code(code)
        {
        }

        ErrorCode code() const noexcept { return m_code; }

    private:
        ErrorCode m_code;
    };

    inline std::string_view to_string(ErrorCode code) noexcept
    {
        switch (code)
        {
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
        case ErrorCode::NotAdjacent: return "NotAdjacent";
        case ErrorCode::NotBiconnected: return "NotBiconnected";
        case ErrorCode::InvalidOrdering: return "InvalidOrdering";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::ProtocolBug: return "ProtocolBug";
        case ErrorCode::WhiteboardOverflow: return "WhiteboardOverflow";
        case ErrorCode::NoWhiteboard: return "NoWhiteboard";
        case ErrorCode::RunawayProtocol: return "RunawayProtocol";
        case ErrorCode::PoolExhausted: return "PoolExhausted";
        case ErrorCode::IoError: return "IoError";
        }
        return "Unknown";
    }
}
