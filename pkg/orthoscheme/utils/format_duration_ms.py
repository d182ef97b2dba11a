def format_duration_ms(duration_ms: float) -> str:
    """
    Format a check's wall-clock duration for the verify summary.

    Examples:
        >>> format_duration_ms(0.25)
        '<1ms'
        >>> format_duration_ms(500)
        '500ms'
        >>> format_duration_ms(1500)
        '1.5s'
        >>> format_duration_ms(65000)
        '1m 5s'
    """
    if duration_ms < 1:
        return "<1ms"
    if duration_ms < 1000:
        return f"{int(duration_ms)}ms"

    total_seconds = duration_ms / 1000
    if total_seconds < 60:
        if total_seconds == int(total_seconds):
            return f"{int(total_seconds)}s"
        return f"{total_seconds:.1f}s"

    minutes, seconds = divmod(int(total_seconds), 60)
    return f"{minutes}m" if seconds == 0 else f"{minutes}m {seconds}s"
