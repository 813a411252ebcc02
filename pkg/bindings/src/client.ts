/**
 * Client for the solver's env-server: one subprocess speaking line-delimited
 * JSON on stdio (protocol "milpgym-envserver-v1").
 *
 * Each request gets an id and resolves when the matching response line
 * arrives. The engine runs in its own process, so long solves never block
 * the Node event loop, and several environments can live on one server.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import { createInterface, type Interface } from "node:readline";
import type { Readable, Writable } from "node:stream";

import { MilpGymError, remoteError } from "./errors.js";

export const PROTOCOL = "milpgym-envserver-v1";

export interface ClientOptions {
  /** Interpreter to launch; must be able to import the solver package. */
  python?: string;
  cwd?: string;
}

export interface GeneratedInstance {
  name: string;
  lpText: string;
}

export interface ParameterDescriptor {
  name: string;
  type: string;
  default: unknown;
  [key: string]: unknown;
}

interface Pending {
  resolve: (result: unknown) => void;
  reject: (err: Error) => void;
}

export class EnvServerClient {
  private readonly proc: ChildProcessByStdio<Writable, Readable, null>;
  private readonly lines: Interface;
  private readonly pending = new Map<number, Pending>();
  private nextId = 1;
  private exited = false;

  constructor(options: ClientOptions = {}) {
    this.proc = spawn(options.python ?? "python3", ["-m", "milpgym.cli", "env-server"], {
      cwd: options.cwd,
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.lines = createInterface({ input: this.proc.stdout });
    this.lines.on("line", (line) => this.onLine(line));
    this.proc.on("exit", (code) => {
      this.exited = true;
      const err = new Error(`env-server exited with code ${code}`);
      for (const p of this.pending.values()) p.reject(err);
      this.pending.clear();
    });
  }

  /** Launch a server and wait for its first ping before returning. */
  static async connect(options: ClientOptions = {}): Promise<EnvServerClient> {
    const client = new EnvServerClient(options);
    const pong = (await client.request("ping")) as { protocol: string };
    if (pong.protocol !== PROTOCOL) {
      client.kill();
      throw new Error(`unexpected protocol ${pong.protocol}`);
    }
    return client;
  }

  private onLine(line: string) {
    let msg: { id: number; ok: boolean; result?: unknown; error?: { type: string; message: string } };
    try {
      msg = JSON.parse(line);
    } catch {
      return; // stray non-protocol output; responses are always valid JSON
    }
    const p = this.pending.get(msg.id);
    if (!p) return;
    this.pending.delete(msg.id);
    if (msg.ok) p.resolve(msg.result);
    else p.reject(remoteError(msg.error!.type, msg.error!.message));
  }

  request(op: string, fields: Record<string, unknown> = {}): Promise<unknown> {
    if (this.exited) return Promise.reject(new Error("env-server already exited"));
    const id = this.nextId++;
    const payload: Record<string, unknown> = { id, op };
    for (const [k, v] of Object.entries(fields)) {
      if (v !== undefined) payload[k] = v;
    }
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      this.proc.stdin.write(JSON.stringify(payload) + "\n", (err) => {
        if (err) {
          this.pending.delete(id);
          reject(err);
        }
      });
    });
  }

  async parameterSchema(): Promise<ParameterDescriptor[]> {
    return (await this.request("parameter_schema")) as ParameterDescriptor[];
  }

  async generate(
    family: string,
    seed: number,
    index = 0,
    params: Record<string, unknown> = {},
  ): Promise<GeneratedInstance> {
    const r = (await this.request("generate", { family, seed, index, params })) as {
      name: string;
      lp_text: string;
    };
    return { name: r.name, lpText: r.lp_text };
  }

  /** Stop the server and wait for the subprocess to finish. */
  async shutdown(): Promise<void> {
    if (this.exited) return;
    const done = new Promise<void>((resolve) => this.proc.once("exit", () => resolve()));
    await this.request("shutdown");
    await done;
  }

  /** Hard teardown for error paths; prefer shutdown(). */
  kill(): void {
    if (!this.exited) this.proc.kill();
  }
}

export { MilpGymError };
