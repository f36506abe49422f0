#pragma once

#include <chrono>

namespace mapf {

/// Wall-clock cutoff shared by the high- and low-level searches.
class Deadline
{
public:
	using Clock = std::chrono::steady_clock;

	Deadline() = default;
	static Deadline after(double seconds)
	{
		Deadline d;
		if (seconds > 0)
		{
			d.limited_ = true;
			d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
		}
		return d;
	}
	static Deadline never() { return {}; }
	static Deadline earliest(const Deadline& a, const Deadline& b)
	{
		if (!a.limited_)
			return b;
		if (!b.limited_)
			return a;
		return a.end_ <= b.end_ ? a : b;
	}

	bool expired() const { return limited_ && Clock::now() >= end_; }
	/// Seconds left, or a large number when unlimited.
	double remaining() const
	{
		if (!limited_)
			return 1e18;
		return std::chrono::duration<double>(end_ - Clock::now()).count();
	}

private:
	bool limited_ = false;
	Clock::time_point end_{};
};

} // namespace mapf
