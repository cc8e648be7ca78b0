/** Canned view-model documents mirroring the service's demo project. */

import type { DrilldownNode, ViewModelDocument } from "../src/types";

export function threeLevelTree(): DrilldownNode {
  return {
    activity: "proj",
    name: "Project",
    actual: 420.0,
    planned: 500.0,
    deviation: -0.16,
    status: "green",
    children: [
      {
        activity: "impl",
        name: "Implementation",
        actual: 220.0,
        planned: 320.0,
        deviation: -0.3125,
        status: "green",
        children: [
          {
            activity: "impl.core",
            name: "Core",
            actual: 70.0,
            planned: 200.0,
            deviation: -0.65,
            status: "green",
            children: [],
          },
          {
            activity: "impl.ui",
            name: "User interface",
            actual: 150.0,
            planned: 120.0,
            deviation: 0.25,
            status: "red",
            children: [],
          },
        ],
      },
      {
        activity: "test",
        name: "Testing",
        actual: 200.0,
        planned: 180.0,
        deviation: 0.1111111111111111,
        status: "yellow",
        children: [],
      },
    ],
  };
}

export function drilldownModel(root: DrilldownNode = threeLevelTree()): ViewModelDocument {
  return {
    view: "v.effort",
    kind: "bar-chart-drilldown",
    title: "Effort adherence",
    status: "ok",
    roles: ["project-manager"],
    inputs: { "e.activities": 1, "f.trc.indicators": 1 },
    data: { root },
    children: {},
  };
}

export function noDataModel(): ViewModelDocument {
  return {
    view: "v.effort",
    kind: "bar-chart-drilldown",
    title: "Effort adherence",
    status: "no-data",
    roles: ["project-manager"],
    inputs: { "e.activities": 0, "f.trc.indicators": 0 },
    data: {},
    children: {},
  };
}
