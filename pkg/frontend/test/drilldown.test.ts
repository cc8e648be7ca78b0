import { describe, expect, it } from "vitest";

import { DrilldownState, canDrill } from "../src/drilldown";
import { threeLevelTree } from "./fixtures";

describe("DrilldownState", () => {
  it("starts at the root", () => {
    const state = new DrilldownState();
    const root = threeLevelTree();
    expect(state.resolve(root).activity).toBe("proj");
    expect(state.atRoot()).toBe(true);
  });

  it("descends into branches but never into leaves", () => {
    const state = new DrilldownState();
    const root = threeLevelTree();
    expect(state.descend(root, "impl")).toBe(true);
    expect(state.resolve(root).activity).toBe("impl");
    expect(state.descend(root, "impl.core")).toBe(false); // leaf
    expect(state.resolve(root).activity).toBe("impl");
  });

  it("ascends back to an identical position", () => {
    const state = new DrilldownState();
    const root = threeLevelTree();
    state.descend(root, "impl");
    expect(state.ascend()).toBe(true);
    expect(state.resolve(root).activity).toBe("proj");
    expect(state.ascend()).toBe(false);
  });

  it("builds a breadcrumb along the path", () => {
    const state = new DrilldownState();
    const root = threeLevelTree();
    state.descend(root, "impl");
    expect(state.breadcrumb(root).map((n) => n.activity)).toEqual(["proj", "impl"]);
    state.jumpTo(0);
    expect(state.breadcrumb(root).map((n) => n.activity)).toEqual(["proj"]);
  });

  it("clamps a stale path when the tree changes under it", () => {
    const state = new DrilldownState();
    const root = threeLevelTree();
    state.descend(root, "impl");
    const reshaped = threeLevelTree();
    reshaped.children = reshaped.children.filter((c) => c.activity !== "impl");
    expect(state.resolve(reshaped).activity).toBe("proj");
  });

  it("knows which nodes can drill", () => {
    const root = threeLevelTree();
    expect(canDrill(root)).toBe(true);
    expect(canDrill(root.children[0]!.children[0]!)).toBe(false);
  });
});
