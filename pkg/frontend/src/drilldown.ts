/** Drill-down navigation over a hierarchical bar-chart model.
 *
 * Pure path logic: the widget keeps a path of activity ids from the root;
 * rendering resolves the path against whatever tree the latest view model
 * carries, so a refresh with a changed hierarchy clamps gracefully.
 */

import type { DrilldownNode } from "./types";

export class DrilldownState {
  private path: string[] = [];

  /** Resolve the current node, truncating stale path segments. */
  resolve(root: DrilldownNode): DrilldownNode {
    let node = root;
    const valid: string[] = [];
    for (const segment of this.path) {
      const child = node.children.find((c) => c.activity === segment);
      if (!child) break;
      valid.push(segment);
      node = child;
    }
    this.path = valid;
    return node;
  }

  /** Descend into a child; ignored when the child has nothing beneath it. */
  descend(root: DrilldownNode, activityId: string): boolean {
    const current = this.resolve(root);
    const child = current.children.find((c) => c.activity === activityId);
    if (!child || child.children.length === 0) return false;
    this.path.push(activityId);
    return true;
  }

  /** Ascend one level; false at the root. */
  ascend(): boolean {
    return this.path.pop() !== undefined;
  }

  /** Jump to a breadcrumb position: 0 = root, 1 = first segment, ... */
  jumpTo(depth: number): void {
    this.path = this.path.slice(0, Math.max(0, depth));
  }

  atRoot(): boolean {
    return this.path.length === 0;
  }

  /** Breadcrumb trail: the root plus every node along the path. */
  breadcrumb(root: DrilldownNode): DrilldownNode[] {
    const trail = [root];
    let node = root;
    for (const segment of this.path) {
      const child = node.children.find((c) => c.activity === segment);
      if (!child) break;
      trail.push(child);
      node = child;
    }
    return trail;
  }
}

export function canDrill(node: DrilldownNode): boolean {
  return node.children.length > 0;
}
