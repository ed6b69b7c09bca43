/**
 * TypeScript bindings for the dasmr maneuvering environment.
 *
 * Each handle owns one `python -m dasmr.envserver` subprocess and talks
 * line-delimited JSON over its stdio. All environment logic stays on the
 * Python side; this layer only ferries values. Floats are serialized with
 * shortest round-trip decimals on both ends, so observations and rewards
 * arrive bit-exactly as the Python environment computed them.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface, type Interface } from "node:readline";
import { readFile } from "node:fs/promises";

export interface RobotConfig {
  wheelbase_L?: number;
  track_W?: number;
  wheel_radius?: number;
  max_wheel_spin?: number;
  max_steer_angle?: number;
  max_steer_rate?: number;
  max_wheel_spin_accel?: number;
}

export interface RewardConfig {
  kind?: "hs" | "es" | "ch" | "cl" | "euclid" | "sparse";
  c?: number;
  d_th?: number;
}

export interface EnvSectionConfig {
  workspace_half_extent?: number;
  goal_half_extent?: number;
  d_th?: number;
  max_episode_steps?: number;
  dt?: number;
  seed?: number;
  continuous_goals?: boolean;
  reset_robot_pose?: [number, number, number];
  reward?: RewardConfig;
}

export interface EnvConfigDoc {
  robot?: RobotConfig;
  env?: EnvSectionConfig;
}

export interface SpaceDescriptor {
  observationDim: number;
  actionLow: number[];
  actionHigh: number[];
  observationLow: number[];
  observationHigh: number[];
  observationNames: string[];
}

export interface ResetResult {
  observation: number[];
  goal: [number, number];
  info: Record<string, unknown>;
}

export interface StepResult {
  observation: number[];
  reward: number;
  terminated: boolean;
  truncated: boolean;
  info: { distance: number; step: number };
}

export interface MakeEnvOptions {
  /** Python executable; defaults to $DASMR_PYTHON or "python3". */
  python?: string;
}

/** Error relayed from the environment process (kind is the Python class). */
export class EnvError extends Error {
  constructor(message: string, public readonly kind: string) {
    super(message);
    this.name = "EnvError";
  }
}

interface ServerResponse {
  ok: boolean;
  error?: string;
  type?: string;
  [key: string]: unknown;
}

interface Pending {
  resolve: (value: ServerResponse) => void;
  reject: (reason: Error) => void;
}

/** One environment instance behind a dedicated subprocess. Not shareable
 * across concurrent callers: requests are answered strictly in order. */
export class EnvHandle {
  private proc: ChildProcessWithoutNullStreams;
  private lines: Interface;
  private pending: Pending[] = [];
  private closed = false;
  private spaces: SpaceDescriptor | null = null;
  /** Resolved configuration echoed back by the environment. */
  configSnapshot: EnvConfigDoc = {};

  private constructor(pythonExecutable: string) {
    this.proc = spawn(pythonExecutable, ["-m", "dasmr.envserver"], {
      stdio: ["pipe", "pipe", "pipe"],
    });
    this.lines = createInterface({ input: this.proc.stdout });
    this.lines.on("line", (line) => {
      const waiter = this.pending.shift();
      if (!waiter) return;
      try {
        waiter.resolve(JSON.parse(line) as ServerResponse);
      } catch (error) {
        waiter.reject(new EnvError(`malformed server response: ${line}`, "ProtocolError"));
      }
    });
    const fail = (reason: string) => {
      this.closed = true;
      while (this.pending.length > 0) {
        this.pending.shift()!.reject(new EnvError(reason, "ProcessExit"));
      }
    };
    this.proc.on("exit", (code) => {
      if (!this.closed || this.pending.length > 0) {
        fail(`environment process exited with code ${code}`);
      }
    });
    this.proc.on("error", (error) => fail(`failed to run environment process: ${error.message}`));
  }

  static async create(config: EnvConfigDoc, options: MakeEnvOptions = {}): Promise<EnvHandle> {
    const python = options.python ?? process.env.DASMR_PYTHON ?? "python3";
    const handle = new EnvHandle(python);
    const response = await handle.request({ op: "make", config });
    handle.spaces = toSpaceDescriptor(response);
    handle.configSnapshot = response.config as EnvConfigDoc;
    return handle;
  }

  private request(payload: Record<string, unknown>): Promise<ServerResponse> {
    if (this.closed) {
      return Promise.reject(new EnvError("environment handle is closed", "ClosedHandle"));
    }
    return new Promise<ServerResponse>((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.proc.stdin.write(JSON.stringify(payload) + "\n");
    }).then((response) => {
      if (!response.ok) {
        throw new EnvError(response.error ?? "unknown environment error", response.type ?? "EnvError");
      }
      return response;
    });
  }

  async reset(seed?: number, goal?: [number, number]): Promise<ResetResult> {
    const payload: Record<string, unknown> = { op: "reset" };
    if (seed !== undefined) payload.seed = seed;
    if (goal !== undefined) payload.goal = goal;
    const response = await this.request(payload);
    return {
      observation: response.observation as number[],
      goal: response.goal as [number, number],
      info: response.info as Record<string, unknown>,
    };
  }

  async step(action: readonly number[]): Promise<StepResult> {
    if (action.length !== 2 || !action.every(Number.isFinite)) {
      throw new EnvError(`action must be two finite numbers, got ${JSON.stringify(action)}`, "ValueError");
    }
    const response = await this.request({ op: "step", action: [...action] });
    return {
      observation: response.observation as number[],
      reward: response.reward as number,
      terminated: response.terminated as boolean,
      truncated: response.truncated as boolean,
      info: response.info as StepResult["info"],
    };
  }

  actionSpace(): { low: number[]; high: number[] } {
    const spaces = this.requireSpaces();
    return { low: [...spaces.actionLow], high: [...spaces.actionHigh] };
  }

  observationSpace(): SpaceDescriptor {
    return { ...this.requireSpaces() };
  }

  async close(): Promise<void> {
    if (this.closed) return;
    this.closed = true;
    try {
      await new Promise<void>((resolve) => {
        this.pending.push({ resolve: () => resolve(), reject: () => resolve() });
        this.proc.stdin.write(JSON.stringify({ op: "close" }) + "\n");
        setTimeout(resolve, 500).unref?.();
      });
    } finally {
      this.proc.kill();
    }
  }

  private requireSpaces(): SpaceDescriptor {
    if (!this.spaces) throw new EnvError("handle was not fully constructed", "ClosedHandle");
    return this.spaces;
  }
}

function toSpaceDescriptor(response: ServerResponse): SpaceDescriptor {
  return {
    observationDim: response.observation_dim as number,
    actionLow: response.action_low as number[],
    actionHigh: response.action_high as number[],
    observationLow: response.observation_low as number[],
    observationHigh: response.observation_high as number[],
    observationNames: response.observation_names as string[],
  };
}

/**
 * Create an environment from a config object or a JSON config file path.
 * The subprocess is spawned immediately; `close()` it when done.
 */
export async function makeEnv(
  config: EnvConfigDoc | string = {},
  options: MakeEnvOptions = {},
): Promise<EnvHandle> {
  const doc = typeof config === "string"
    ? (JSON.parse(await readFile(config, "utf8")) as EnvConfigDoc)
    : config;
  return EnvHandle.create(doc, options);
}
