#pragma once

#include <algorithm>
#include <climits>
#include <set>
#include <utility>
#include <vector>

#include "mapf/solver.hpp"

namespace mapf {

/// Queue keys of a CT node, frozen while the node is queued.
struct QueueEntry
{
	int id = 0;
	/// lb + h
	int lbh = 0;
	/// cost + h-hat (EECBS) or cost (ECBS)
	double fhat = 0;
	int hc = 0;
	int cost = 0;
	bool queued = false;
	bool in_focal = false;
};

/// CLEANUP by lb + h, OPEN by f-hat, and FOCAL: the OPEN entries within the focal
/// bound, ordered by conflict count. CBS keeps only CLEANUP.
class QueueSet
{
public:
	static constexpr double kEps = 1e-9;

	QueueSet(Mode mode, double w) : mode_(mode), w_(w) {}

	bool empty() const { return cleanup_.empty(); }
	std::size_t size() const { return cleanup_.size(); }

	void push(QueueEntry* n)
	{
		n->queued = true;
		cleanup_.insert(n);
		if (mode_ == Mode::CBS)
			return;
		open_.insert(n);
		if (n->fhat <= bound_ + kEps)
		{
			focal_.insert(n);
			n->in_focal = true;
		}
		sync();
	}

	void remove(QueueEntry* n)
	{
		cleanup_.erase(n);
		if (mode_ != Mode::CBS)
		{
			open_.erase(n);
			if (n->in_focal)
				focal_.erase(n);
		}
		n->in_focal = false;
		n->queued = false;
		sync();
	}

	/// Lower bound on the optimal sum of costs as of the last selection, never decreasing.
	int lower_bound() const { return lb_; }
	/// Current FOCAL threshold on f-hat.
	double focal_bound() const { return bound_; }
	bool in_focal(const QueueEntry* n) const { return n->in_focal; }

	/// Picks and removes the next node. EECBS: best FOCAL node if its cost is within
	/// w * lb, else the best OPEN node under the same test, else the best CLEANUP node.
	std::pair<QueueEntry*, Origin> select()
	{
		// only valid while every frontier node is queued, i.e. right before a selection
		if (!cleanup_.empty())
			lb_ = std::max(lb_, (*cleanup_.begin())->lbh);
		sync();
		QueueEntry* chosen = nullptr;
		Origin origin = Origin::Cleanup;
		switch (mode_)
		{
		case Mode::CBS:
			chosen = *cleanup_.begin();
			break;
		case Mode::ECBS:
			chosen = *focal_.begin();
			origin = Origin::Focal;
			break;
		case Mode::EECBS:
		{
			QueueEntry* best_hc = *focal_.begin();
			QueueEntry* best_fhat = *open_.begin();
			if (best_hc->cost <= w_ * lb_ + kEps)
			{
				chosen = best_hc;
				origin = Origin::Focal;
			}
			else if (best_fhat->cost <= w_ * lb_ + kEps)
			{
				chosen = best_fhat;
				origin = Origin::Open;
			}
			else
			{
				chosen = *cleanup_.begin();
			}
			break;
		}
		}
		remove(chosen);
		return {chosen, origin};
	}

private:
	struct CleanupLess
	{
		bool operator()(const QueueEntry* a, const QueueEntry* b) const
		{
			if (a->lbh != b->lbh)
				return a->lbh < b->lbh;
			if (a->hc != b->hc)
				return a->hc < b->hc;
			return a->id < b->id;
		}
	};
	struct OpenLess
	{
		bool operator()(const QueueEntry* a, const QueueEntry* b) const
		{
			if (a->fhat != b->fhat)
				return a->fhat < b->fhat;
			if (a->hc != b->hc)
				return a->hc < b->hc;
			return a->id < b->id;
		}
	};
	struct FocalLess
	{
		bool operator()(const QueueEntry* a, const QueueEntry* b) const
		{
			if (a->hc != b->hc)
				return a->hc < b->hc;
			if (a->cost != b->cost)
				return a->cost > b->cost;
			return a->id < b->id;
		}
	};

	double target_bound()
	{
		if (mode_ == Mode::EECBS)
			return open_.empty() ? bound_ : w_ * (*open_.begin())->fhat;
		if (mode_ == Mode::ECBS && !cleanup_.empty())
			return w_ * std::max(lb_, (*cleanup_.begin())->lbh);
		return w_ * lb_;
	}

	// Brings FOCAL in line with the current bound in both directions.
	void sync()
	{
		if (mode_ == Mode::CBS)
			return;
		const double nb = target_bound();
		if (nb > bound_)
		{
			for (auto it = first_above(bound_); it != open_.end() && (*it)->fhat <= nb + kEps; ++it)
			{
				if (!(*it)->in_focal)
				{
					focal_.insert(*it);
					(*it)->in_focal = true;
				}
			}
		}
		else if (nb < bound_)
		{
			for (auto it = first_above(nb); it != open_.end() && (*it)->fhat <= bound_ + kEps; ++it)
			{
				if ((*it)->in_focal)
				{
					focal_.erase(*it);
					(*it)->in_focal = false;
				}
			}
		}
		bound_ = nb;
	}

	std::set<QueueEntry*, OpenLess>::iterator first_above(double bound)
	{
		probe_.fhat = bound + kEps;
		probe_.hc = INT_MAX;
		probe_.id = INT_MAX;
		return open_.upper_bound(&probe_);
	}

	Mode mode_;
	double w_;
	double bound_ = 0;
	int lb_ = 0;
	QueueEntry probe_;
	std::set<QueueEntry*, CleanupLess> cleanup_;
	std::set<QueueEntry*, OpenLess> open_;
	std::set<QueueEntry*, FocalLess> focal_;
};

/// Running averages of the one-step errors of the conflict count and of the cost.
class ErrorModel
{
public:
	void observe(double eps_d, double eps_h)
	{
		sum_d_ += eps_d;
		sum_h_ += eps_h;
		++count_;
	}

	/// h-hat for a node with `h_c` conflicts; 0 before the first observation.
	double estimate(int h_c) const
	{
		if (count_ == 0)
			return 0.0;
		const double eps_d = std::clamp(sum_d_ / count_, 0.0, 0.999);
		const double eps_h = std::max(0.0, sum_h_ / count_);
		return h_c / (1.0 - eps_d) * eps_h;
	}

	long observations() const { return count_; }
	double mean_eps_d() const { return count_ ? sum_d_ / count_ : 0.0; }
	double mean_eps_h() const { return count_ ? sum_h_ / count_ : 0.0; }

private:
	double sum_d_ = 0;
	double sum_h_ = 0;
	long count_ = 0;
};

/// (eps_d, eps_h) between a parent and its best child: the child ideally has one
/// conflict fewer at the same cost.
inline std::pair<double, double> one_step_errors(int parent_hc, int parent_cost, int child_hc, int child_cost)
{
	return {double(child_hc - (parent_hc - 1)), double(child_cost - parent_cost)};
}

struct BypassCheck
{
	Mode mode = Mode::EECBS;
	double w = 1.0;
	Origin origin = Origin::None;
	int parent_hc = 0;
	int parent_cost = 0;
	const std::vector<int>* parent_f_min = nullptr;
	int child_hc = 0;
	int child_cost = 0;
	const std::vector<int>* child_path_costs = nullptr;
	int lower_bound = 0;
};

/// Whether the parent may adopt the child's paths instead of branching.
inline bool bypass_allowed(const BypassCheck& b)
{
	constexpr double kEps = 1e-9;
	if (b.child_hc >= b.parent_hc)
		return false;
	if (b.mode == Mode::EECBS)
	{
		if (b.origin == Origin::Cleanup)
			return false;
	}
	else if (b.child_cost != b.parent_cost)
	{
		return false;
	}
	for (std::size_t i = 0; i < b.child_path_costs->size(); ++i)
		if ((*b.child_path_costs)[i] > b.w * (*b.parent_f_min)[i] + kEps)
			return false;
	return b.child_cost <= b.w * b.lower_bound + kEps;
}

} // namespace mapf
